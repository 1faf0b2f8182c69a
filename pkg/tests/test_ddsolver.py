"""Open-card solver vs. an independent plain-enumeration oracle.

The oracle below re-derives trick rules from scratch on card code strings
(no imports from the solver's rule tables) and searches by exhaustive
minimax without pruning or caching.  Any disagreement means the fast
solver is wrong.
"""

import random

import pytest

from skatkit.cards import DECK, Card, CardSet, GameType, Position, parse_card
from skatkit.ddsolver import (
    PlayState,
    apply_move,
    best_card,
    game_rules,
    initial_state,
    legal_moves,
    principal_variation,
    solve,
    solve_win,
    trick_winner,
)

ALL_CODES = [s + r for s in "CSHD" for r in "ATKQJ987"]
EYES = {"A": 11, "T": 10, "K": 4, "Q": 3, "J": 2, "9": 0, "8": 0, "7": 0}
TRUMP_LETTER = {"clubs": "C", "spades": "S", "hearts": "H", "diamonds": "D"}


def oracle_class(code, game):
    if game == "null":
        return code[0]
    if code[1] == "J" or code[0] == TRUMP_LETTER.get(game, ""):
        return "trump"
    return code[0]


def oracle_power(code, game):
    if game == "null":
        return "789TJQKA".index(code[1])
    if code[1] == "J":
        return 100 + "DHSC".index(code[0])
    return "789QKTA".index(code[1])


def oracle_winner_offset(trick, game):
    best = 0
    for i in (1, 2):
        c, b = trick[i], trick[best]
        cc, cb = oracle_class(c, game), oracle_class(b, game)
        if cc == cb:
            if oracle_power(c, game) > oracle_power(b, game):
                best = i
        elif cc == "trump":
            best = i
    return best


def oracle_legal(hand, led, game):
    if led is None:
        return list(hand)
    cls = oracle_class(led, game)
    follow = [c for c in hand if oracle_class(c, game) == cls]
    return follow if follow else list(hand)


def oracle_value(hands, leader, trick, game, declarer):
    """Future declarer eyes (trump) or escape flag (null), exhaustively."""
    if len(trick) == 3:
        winner = (leader + oracle_winner_offset(trick, game)) % 3
        if game == "null":
            if winner == declarer:
                return 0
            return oracle_value(hands, winner, [], game, declarer)
        pts = sum(EYES[c[1]] for c in trick)
        later = oracle_value(hands, winner, [], game, declarer)
        return later + (pts if winner == declarer else 0)
    if not trick and not any(hands):
        return 1 if game == "null" else 0
    seat = (leader + len(trick)) % 3
    values = []
    for code in oracle_legal(hands[seat], trick[0] if trick else None, game):
        hands[seat].remove(code)
        values.append(oracle_value(hands, leader, trick + [code], game, declarer))
        hands[seat].append(code)
    return max(values) if seat == declarer else min(values)


GAME_NAMES = ["grand", "null", "clubs", "spades", "hearts", "diamonds"]


def random_boundary_state(rng, game_name, tricks):
    cards = rng.sample(ALL_CODES, 3 * tricks)
    hands = [cards[0:tricks], cards[tricks : 2 * tricks], cards[2 * tricks :]]
    declarer = rng.randrange(3)
    leader = rng.randrange(3)
    state = PlayState(
        hands=tuple(CardSet.from_codes(" ".join(h)) for h in hands),
        game=GameType.from_name(game_name),
        declarer=Position(declarer),
        leader=Position(leader),
    )
    return state, hands, leader, declarer


def assert_matches_oracle(state, hands, leader, declarer, game_name):
    want = oracle_value([list(h) for h in hands], leader, [], game_name, declarer)
    got = solve(state)
    assert got == want, (
        f"{game_name} declarer={declarer} leader={leader} hands={hands}: "
        f"solver {got} != oracle {want}"
    )


@pytest.mark.parametrize("game_name", GAME_NAMES)
def test_solver_matches_oracle_small(game_name):
    rng = random.Random(f"dd-small:{game_name}")
    for trial in range(120):
        tricks = rng.choice([1, 2, 3])
        state, hands, leader, declarer = random_boundary_state(rng, game_name, tricks)
        assert_matches_oracle(state, hands, leader, declarer, game_name)


@pytest.mark.parametrize("game_name", ["grand", "null", "hearts"])
def test_solver_matches_oracle_midtrick(game_name):
    rng = random.Random(0xC0FFEE + len(game_name))
    for trial in range(60):
        tricks = rng.choice([2, 3])
        state, hands, leader, declarer = random_boundary_state(rng, game_name, tricks)
        pending = rng.choice([1, 2])
        for _ in range(pending):
            moves = list(legal_moves(state))
            state = apply_move(state, rng.choice(moves))
        oracle_hands = [[c.code for c in h] for h in state.hands]
        trick = [c.code for c in state.trick]
        base = state.declarer_eyes + state.skat_eyes
        want = oracle_value(oracle_hands, int(state.leader), trick, game_name, declarer)
        if game_name == "null":
            expect = 0 if state.declarer_tricks else want
            assert solve(state) == expect
        else:
            assert solve(state) == base + want


def test_follow_suit_rules():
    # hearts game: club jack is a trump, not a club
    st = PlayState(
        hands=(
            CardSet.from_codes("CJ CA"),
            CardSet.from_codes("HA C7"),
            CardSet.from_codes("SA S7"),
        ),
        game=GameType.HEARTS,
        declarer=Position.FOREHAND,
        leader=Position.MIDDLEHAND,
    )
    st2 = apply_move(st, parse_card("HA"))  # trump led
    assert st2.to_move == Position.REARHAND
    assert set(c.code for c in legal_moves(st2)) == {"SA", "S7"}  # void in trump
    st3 = apply_move(st2, parse_card("S7"))
    # forehand must follow trump with the club jack, cannot slough the ace
    assert set(c.code for c in legal_moves(st3)) == {"CJ"}


def test_null_jack_follows_its_suit():
    st = PlayState(
        hands=(
            CardSet.from_codes("CJ C7"),
            CardSet.from_codes("CA HA"),
            CardSet.from_codes("C8 H7"),
        ),
        game=GameType.NULL,
        declarer=Position.FOREHAND,
        leader=Position.MIDDLEHAND,
    )
    st2 = apply_move(st, parse_card("CA"))
    st3 = apply_move(st2, parse_card("C8"))
    assert set(c.code for c in legal_moves(st3)) == {"CJ", "C7"}


def test_trick_winner_cases():
    t = tuple(parse_card(c) for c in ("HA", "H7", "CJ"))
    assert trick_winner(t, Position.FOREHAND, GameType.HEARTS) == Position.REARHAND
    assert trick_winner(t, Position.FOREHAND, GameType.GRAND) == Position.REARHAND
    # null: jack ranks between ten and queen, no trumps anywhere
    t = tuple(parse_card(c) for c in ("CT", "CJ", "CQ"))
    assert trick_winner(t, Position.MIDDLEHAND, GameType.NULL) == Position.FOREHAND
    # discards never win
    t = tuple(parse_card(c) for c in ("S7", "HA", "DA"))
    assert trick_winner(t, Position.REARHAND, GameType.GRAND) == Position.REARHAND


def test_apply_move_credits_declarer_only():
    st = PlayState(
        hands=(
            CardSet.from_codes("SA"),
            CardSet.from_codes("ST"),
            CardSet.from_codes("S7"),
        ),
        game=GameType.GRAND,
        declarer=Position.MIDDLEHAND,
        leader=Position.FOREHAND,
    )
    st = apply_move(st, parse_card("SA"))
    st = apply_move(st, parse_card("ST"))
    st = apply_move(st, parse_card("S7"))
    # forehand's ace took 21 eyes away from the declarer
    assert st.declarer_eyes == 0
    assert st.declarer_tricks == 0
    assert st.leader == Position.FOREHAND
    assert st.trick == ()


def test_apply_move_rejects_illegal():
    st = PlayState(
        hands=(
            CardSet.from_codes("HA H7"),
            CardSet.from_codes("HK S7"),
            CardSet.from_codes("HQ S8"),
        ),
        game=GameType.GRAND,
        declarer=Position.FOREHAND,
        leader=Position.FOREHAND,
    )
    st = apply_move(st, parse_card("HA"))
    with pytest.raises(ValueError, match="S7"):
        apply_move(st, parse_card("S7"))


def test_playstate_validation():
    with pytest.raises(ValueError, match="overlap"):
        PlayState(
            hands=(CardSet.from_codes("HA"), CardSet.from_codes("HA"), CardSet.from_codes("S7")),
            game=GameType.GRAND,
            declarer=Position.FOREHAND,
            leader=Position.FOREHAND,
        )
    with pytest.raises(ValueError, match="sizes"):
        PlayState(
            hands=(CardSet.from_codes("HA H7"), CardSet.from_codes("HK"), CardSet.from_codes("HQ")),
            game=GameType.GRAND,
            declarer=Position.FOREHAND,
            leader=Position.FOREHAND,
        )
    with pytest.raises(ValueError, match="still in a hand"):
        PlayState(
            hands=(CardSet.from_codes("HA"), CardSet.from_codes("HK"), CardSet.from_codes("HQ")),
            game=GameType.GRAND,
            declarer=Position.FOREHAND,
            leader=Position.FOREHAND,
            trick=(parse_card("HA"),),
        )


def test_solve_offsets_by_captured_and_skat_eyes():
    st = PlayState(
        hands=(
            CardSet.from_codes("CJ"),
            CardSet.from_codes("H7"),
            CardSet.from_codes("S8"),
        ),
        game=GameType.GRAND,
        declarer=Position.FOREHAND,
        leader=Position.FOREHAND,
        declarer_eyes=30,
        skat_eyes=14,
    )
    assert solve(st) == 30 + 14 + 2


def test_null_sure_win_and_sure_loss():
    # lowest card of every suit twice over: can always stay under
    safe = CardSet.from_codes("C7 C8 S7 S8 H7 H8 D7 D8")
    rest = DECK - safe
    rest_codes = [c.code for c in rest]
    h1 = CardSet.from_codes(" ".join(rest_codes[:8]))
    h2 = CardSet.from_codes(" ".join(rest_codes[8:16]))
    st = PlayState(hands=(safe, h1, h2), game=GameType.NULL,
                   declarer=Position.FOREHAND, leader=Position.FOREHAND)
    assert solve(st) == 1
    assert solve_win(st) is True

    # four aces lose a trick as soon as their suits get led often enough
    aces = CardSet.from_codes("CA SA HA DA")
    others = [c.code for c in DECK - aces]
    h1 = CardSet.from_codes(" ".join(others[:4]))
    h2 = CardSet.from_codes(" ".join(others[4:8]))
    st = PlayState(hands=(aces, h1, h2), game=GameType.NULL,
                   declarer=Position.FOREHAND, leader=Position.MIDDLEHAND)
    assert solve(st) == 0
    assert solve_win(st) is False


def test_solve_win_agrees_with_exact_value():
    rng = random.Random(1234)
    for _ in range(40):
        game_name = rng.choice(["grand", "clubs", "hearts"])
        state, _, _, _ = random_boundary_state(rng, game_name, rng.choice([4, 5]))
        state = PlayState(
            hands=state.hands, game=state.game, declarer=state.declarer,
            leader=state.leader, skat_eyes=rng.choice([0, 25, 55]),
        )
        assert solve_win(state) == (solve(state) >= 61)


def test_best_card_value_consistency():
    rng = random.Random(99)
    for _ in range(25):
        game_name = rng.choice(GAME_NAMES)
        state, _, _, _ = random_boundary_state(rng, game_name, 3)
        root = solve(state)
        card, value = best_card(state)
        assert value == root
        assert card in legal_moves(state)
        assert solve(apply_move(state, card)) == root


def test_principal_variation_plays_out_to_solver_value():
    rng = random.Random(5)
    state, _, _, _ = random_boundary_state(rng, "clubs", 4)
    root = solve(state)
    plays = list(principal_variation(state))
    assert len(plays) == 12
    for seat, card, value in plays:
        state_seat = state.to_move
        assert seat == state_seat
        assert value == root
        state = apply_move(state, card)
    assert state.declarer_eyes + state.skat_eyes == root


def test_full_deal_solve_runs():
    rng = random.Random(7)
    cards = rng.sample(ALL_CODES, 32)
    hands = tuple(CardSet.from_codes(" ".join(cards[i * 10 : (i + 1) * 10])) for i in range(3))
    skat = CardSet.from_codes(" ".join(cards[30:]))
    st = initial_state(hands, GameType.CLUBS, Position.FOREHAND, skat)
    value = solve(st)
    assert 0 <= value <= 120
    assert solve_win(st) == (value >= 61)
    # null full deal as well
    stn = initial_state(hands, GameType.NULL, Position.FOREHAND)
    assert solve(stn) in (0, 1)


def test_rules_tables_shape():
    for game in GameType:
        rules = game_rules(game)
        assert sorted(int(i) for i in rules.order) == list(range(32))
        covered = 0
        for m in rules.classmask:
            assert covered & int(m) == 0
            covered |= int(m)
        assert covered == (1 << 32) - 1
        if game is GameType.NULL:
            assert int(rules.classmask[4]) == 0
        elif game is GameType.GRAND:
            assert bin(int(rules.classmask[4])).count("1") == 4
        else:
            assert bin(int(rules.classmask[4])).count("1") == 11
