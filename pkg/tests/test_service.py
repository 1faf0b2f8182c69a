"""Advisory endpoint: payload shape, validation split, static hosting."""

import pytest
from fastapi.testclient import TestClient

from helpers import skill_tables
from skatkit.service import create_app

HAND12 = "CJ SJ HJ CA CT C9 C8 HA HT H9 D8 D7".split()
GAME_NAMES = {"grand", "clubs", "spades", "hearts", "diamonds", "null"}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(skill_tables()))


def _advise(client, **overrides):
    body = {"hand": HAND12, "position": "forehand", "bid": 18}
    body.update(overrides)
    return client.post("/api/v1/advise", json=body)


def test_full_hand_request_ranks_every_game(client):
    response = _advise(client)
    assert response.status_code == 200
    payload = response.json()
    assert payload["hand"] == sorted(HAND12)
    assert payload["position"] == "fore"
    assert {r["game"] for r in payload["rankings"]} == GAME_NAMES
    assert not payload["truncated"]
    for ranking in payload["rankings"]:
        assert ranking["candidates"], f"{ranking['game']} returned no candidate"
        for cand in ranking["candidates"]:
            assert set(cand) >= {
                "game", "put", "win_prob", "expected_cost",
                "soft_score", "features", "fired_rules", "relaxed",
            }
            assert len(cand["put"]) == 2
            assert cand["fired_rules"] == []


def test_split_hand_equals_joined_hand(client):
    joined = _advise(client).json()
    split = _advise(client, hand=HAND12[:10], skat=HAND12[10:]).json()
    assert split["rankings"] == joined["rankings"]


def test_single_game_filter_and_top(client):
    payload = _advise(client, game="grand", top=2).json()
    assert len(payload["rankings"]) == 1
    assert payload["rankings"][0]["game"] == "grand"
    assert len(payload["rankings"][0]["candidates"]) <= 2


def test_malformed_hands_are_400(client):
    assert _advise(client, hand=HAND12[:11]).status_code == 400
    assert _advise(client, hand=HAND12 + ["DQ"]).status_code == 400
    assert _advise(client, hand=HAND12[:11] + ["CJ"]).status_code == 400
    assert _advise(client, hand=HAND12[:11] + ["XX"]).status_code == 400
    assert _advise(client, hand=HAND12[:10], skat=["D8"]).status_code == 400
    assert _advise(client, hand=HAND12[:10], skat=["CJ", "D8"]).status_code == 400
    assert _advise(client, hand=HAND12, skat=["D8", "DQ"]).status_code == 400


def test_illegal_context_is_422(client):
    assert _advise(client, position="dealer").status_code == 422
    assert _advise(client, bid=19).status_code == 422
    assert _advise(client, game="ramsch").status_code == 422


def test_bid_zero_means_no_bid_context(client):
    assert _advise(client, bid=0).status_code == 200


def test_health_endpoint(client):
    response = client.get("/api/v1/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_static_mount_serves_the_ui(tmp_path):
    (tmp_path / "index.html").write_text("<html><body>advisor</body></html>")
    app = create_app(skill_tables(), static_dir=tmp_path)
    client = TestClient(app)
    page = client.get("/")
    assert page.status_code == 200
    assert "advisor" in page.text
    # the api mounts take precedence over the static root
    assert _advise(client).status_code == 200
