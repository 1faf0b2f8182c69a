"""Numba kernels for the open-card solver.

Hands are 32-bit masks carried in uint64 locals.  One recursive search per
game family: eye count for trump games, trick avoidance for null.  The
recursion steps a whole trick per call; the three in-trick decisions are
unrolled as nested alpha-beta loops, so the transposition table only ever
sees trick-boundary states.  Table entries are tagged with a per-solve
generation stamp, which makes clearing O(1).
"""

from __future__ import annotations

import numba as nb
import numpy as np
from numba import int64, uint32, uint64

TT_BITS = 21
TT_SIZE = 1 << TT_BITS
TT_MASK = TT_SIZE - 1

FLAG_EXACT = 1
FLAG_LOWER = 2
FLAG_UPPER = 3

TT_KEY = np.zeros(TT_SIZE, dtype=np.uint64)
TT_VAL = np.zeros(TT_SIZE, dtype=np.int16)
TT_FLAG = np.zeros(TT_SIZE, dtype=np.uint8)
TT_GEN = np.zeros(TT_SIZE, dtype=np.uint32)


@nb.njit(uint64(uint64), cache=True, inline="always")
def _mix(z):
    z = z + uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)
    return z ^ (z >> uint64(31))


@nb.njit(uint64(uint64, uint64, uint64, int64), cache=True, inline="always")
def _state_key(h0, h1, h2, leader):
    k = _mix(h0)
    k = _mix(k ^ (h1 << uint64(1)))
    k = _mix(k ^ (h2 << uint64(2)))
    return k ^ uint64(leader)


@nb.njit(uint64(uint64, int64, uint64[::1]), cache=True, inline="always")
def _legal(hand, led_class, classmask):
    if led_class < 0:
        return hand
    follow = hand & classmask[led_class]
    if follow != uint64(0):
        return follow
    return hand


@nb.njit(nb.boolean(int64, int64, nb.int8[::1], nb.int16[::1]), cache=True, inline="always")
def _beats(challenger, holder, classv, power):
    if classv[challenger] == classv[holder]:
        return power[challenger] > power[holder]
    return classv[challenger] == 4


_SEARCH_SIG = int64(
    uint64, uint64, uint64, int64, int64, int64, int64,
    nb.int8[::1], nb.int16[::1], nb.int16[::1], uint64[::1], nb.int8[::1],
    uint64[::1], nb.int16[::1], nb.uint8[::1], nb.uint32[::1], uint32,
)


@nb.njit(_SEARCH_SIG, cache=True)
def search_eyes(
    h0, h1, h2, leader, alpha, beta, declarer,
    classv, power, points, classmask, order,
    tkey, tval, tflag, tgen, gen,
):
    """Declarer eyes still to be taken from a trick-boundary state."""
    if h0 | h1 | h2 == uint64(0):
        return 0

    key = _state_key(h0, h1, h2, leader)
    slot = int64(key & uint64(TT_MASK))
    if tgen[slot] == gen and tkey[slot] == key:
        flag = tflag[slot]
        val = int64(tval[slot])
        if flag == FLAG_EXACT:
            return val
        if flag == FLAG_LOWER:
            if val >= beta:
                return val
            if val > alpha:
                alpha = val
        else:
            if val <= alpha:
                return val
            if val < beta:
                beta = val

    orig_alpha = alpha
    orig_beta = beta
    s0 = leader
    s1 = (leader + 1) % 3
    s2 = (leader + 2) % 3
    hand0 = h0 if s0 == 0 else (h1 if s0 == 1 else h2)
    hand1 = h0 if s1 == 0 else (h1 if s1 == 1 else h2)
    hand2 = h0 if s2 == 0 else (h1 if s2 == 1 else h2)

    agent0 = s0 == declarer
    a0 = alpha
    b0 = beta
    v0 = int64(-1) if agent0 else int64(121)

    for i0 in range(32):
        c0 = int64(order[i0])
        if hand0 >> uint64(c0) & uint64(1) == uint64(0):
            continue
        led = int64(classv[c0])
        bit0 = uint64(1) << uint64(c0)

        agent1 = s1 == declarer
        a1 = a0
        b1 = b0
        v1 = int64(-1) if agent1 else int64(121)
        legal1 = _legal(hand1, led, classmask)

        for i1 in range(32):
            c1 = int64(order[i1])
            if legal1 >> uint64(c1) & uint64(1) == uint64(0):
                continue
            bit1 = uint64(1) << uint64(c1)
            if _beats(c1, c0, classv, power):
                w01, ws01 = c1, s1
            else:
                w01, ws01 = c0, s0

            agent2 = s2 == declarer
            a2 = a1
            b2 = b1
            v2 = int64(-1) if agent2 else int64(121)
            legal2 = _legal(hand2, led, classmask)

            for i2 in range(32):
                c2 = int64(order[i2])
                if legal2 >> uint64(c2) & uint64(1) == uint64(0):
                    continue
                bit2 = uint64(1) << uint64(c2)
                if _beats(c2, w01, classv, power):
                    wseat = s2
                else:
                    wseat = ws01
                gained = int64(0)
                if wseat == declarer:
                    gained = int64(points[c0] + points[c1] + points[c2])

                nh0, nh1, nh2 = h0, h1, h2
                if s0 == 0:
                    nh0 ^= bit0
                elif s0 == 1:
                    nh1 ^= bit0
                else:
                    nh2 ^= bit0
                if s1 == 0:
                    nh0 ^= bit1
                elif s1 == 1:
                    nh1 ^= bit1
                else:
                    nh2 ^= bit1
                if s2 == 0:
                    nh0 ^= bit2
                elif s2 == 1:
                    nh1 ^= bit2
                else:
                    nh2 ^= bit2

                sub = search_eyes(
                    nh0, nh1, nh2, wseat, a2 - gained, b2 - gained, declarer,
                    classv, power, points, classmask, order,
                    tkey, tval, tflag, tgen, gen,
                )
                v = sub + gained
                if agent2:
                    if v > v2:
                        v2 = v
                    if v2 > a2:
                        a2 = v2
                    if v2 >= b2:
                        break
                else:
                    if v < v2:
                        v2 = v
                    if v2 < b2:
                        b2 = v2
                    if v2 <= a2:
                        break

            if agent1:
                if v2 > v1:
                    v1 = v2
                if v1 > a1:
                    a1 = v1
                if v1 >= b1:
                    break
            else:
                if v2 < v1:
                    v1 = v2
                if v1 < b1:
                    b1 = v1
                if v1 <= a1:
                    break

        if agent0:
            if v1 > v0:
                v0 = v1
            if v0 > a0:
                a0 = v0
            if v0 >= b0:
                break
        else:
            if v1 < v0:
                v0 = v1
            if v0 < b0:
                b0 = v0
            if v0 <= a0:
                break

    if v0 <= orig_alpha:
        flag = FLAG_UPPER
    elif v0 >= orig_beta:
        flag = FLAG_LOWER
    else:
        flag = FLAG_EXACT
    tkey[slot] = key
    tval[slot] = np.int16(v0)
    tflag[slot] = np.uint8(flag)
    tgen[slot] = gen
    return v0


@nb.njit(_SEARCH_SIG, cache=True)
def search_null(
    h0, h1, h2, leader, alpha, beta, declarer,
    classv, power, points, classmask, order,
    tkey, tval, tflag, tgen, gen,
):
    """1 if the declarer escapes every remaining trick, else 0."""
    if h0 | h1 | h2 == uint64(0):
        return 1

    key = _state_key(h0, h1, h2, leader)
    slot = int64(key & uint64(TT_MASK))
    if tgen[slot] == gen and tkey[slot] == key:
        if tflag[slot] == FLAG_EXACT:
            return int64(tval[slot])

    s0 = leader
    s1 = (leader + 1) % 3
    s2 = (leader + 2) % 3
    hand0 = h0 if s0 == 0 else (h1 if s0 == 1 else h2)
    hand1 = h0 if s1 == 0 else (h1 if s1 == 1 else h2)
    hand2 = h0 if s2 == 0 else (h1 if s2 == 1 else h2)

    agent0 = s0 == declarer
    v0 = int64(0) if agent0 else int64(1)

    for i0 in range(32):
        c0 = int64(order[i0])
        if hand0 >> uint64(c0) & uint64(1) == uint64(0):
            continue
        led = int64(classv[c0])
        bit0 = uint64(1) << uint64(c0)

        agent1 = s1 == declarer
        v1 = int64(0) if agent1 else int64(1)
        legal1 = _legal(hand1, led, classmask)

        for i1 in range(32):
            c1 = int64(order[i1])
            if legal1 >> uint64(c1) & uint64(1) == uint64(0):
                continue
            bit1 = uint64(1) << uint64(c1)
            if _beats(c1, c0, classv, power):
                w01, ws01 = c1, s1
            else:
                w01, ws01 = c0, s0

            agent2 = s2 == declarer
            v2 = int64(0) if agent2 else int64(1)
            legal2 = _legal(hand2, led, classmask)

            for i2 in range(32):
                c2 = int64(order[i2])
                if legal2 >> uint64(c2) & uint64(1) == uint64(0):
                    continue
                bit2 = uint64(1) << uint64(c2)
                if _beats(c2, w01, classv, power):
                    wseat = s2
                else:
                    wseat = ws01

                if wseat == declarer:
                    v = int64(0)
                else:
                    nh0, nh1, nh2 = h0, h1, h2
                    if s0 == 0:
                        nh0 ^= bit0
                    elif s0 == 1:
                        nh1 ^= bit0
                    else:
                        nh2 ^= bit0
                    if s1 == 0:
                        nh0 ^= bit1
                    elif s1 == 1:
                        nh1 ^= bit1
                    else:
                        nh2 ^= bit1
                    if s2 == 0:
                        nh0 ^= bit2
                    elif s2 == 1:
                        nh1 ^= bit2
                    else:
                        nh2 ^= bit2
                    v = search_null(
                        nh0, nh1, nh2, wseat, alpha, beta, declarer,
                        classv, power, points, classmask, order,
                        tkey, tval, tflag, tgen, gen,
                    )

                if agent2:
                    if v > v2:
                        v2 = v
                    if v2 == 1:
                        break
                else:
                    if v < v2:
                        v2 = v
                    if v2 == 0:
                        break

            if agent1:
                if v2 > v1:
                    v1 = v2
                if v1 == 1:
                    break
            else:
                if v2 < v1:
                    v1 = v2
                if v1 == 0:
                    break

        if agent0:
            if v1 > v0:
                v0 = v1
            if v0 == 1:
                break
        else:
            if v1 < v0:
                v0 = v1
            if v0 == 0:
                break

    tkey[slot] = key
    tval[slot] = np.int16(v0)
    tflag[slot] = np.uint8(FLAG_EXACT)
    tgen[slot] = gen
    return v0
