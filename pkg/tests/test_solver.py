import itertools
import random

import pytest

import rzt.solver as solver_mod
from rzt.board import PASS, Color, Position, Zone, captured_by, is_legal_position, parse_point, parse_position, play
from rzt.pattern import ZonePattern, matches, pattern_from
from rzt.solver import (
    BruteForce,
    Goal,
    Outcome,
    SolveConfig,
    Solver,
    TableMode,
    Verdict,
    brute_force_solve,
    completions,
    liberty_closure,
    move_footprint,
    rz_for_and_win,
    rz_for_or_win,
    solve,
    verify_rzp,
)
from rzt.table import Mode

GOAL = Goal(Color.WHITE)


def random_position(rng, side, pw=0.45, pb=0.25):
    while True:
        cells = [rng.random() for _ in range(side * side)]
        black = sum(1 << i for i, r in enumerate(cells) if pw <= r < pw + pb)
        white = sum(1 << i for i, r in enumerate(cells) if r < pw)
        p = Position(side, black, white, rng.choice([Color.BLACK, Color.WHITE]))
        if is_legal_position(p):
            return p


def all_3x3():
    out = []
    for combo in itertools.product((0, 1, 2), repeat=9):
        b = sum(1 << i for i, c in enumerate(combo) if c == 1)
        w = sum(1 << i for i, c in enumerate(combo) if c == 2)
        for to_move in (Color.BLACK, Color.WHITE):
            p = Position(3, b, w, to_move)
            if is_legal_position(p):
                out.append(p)
    return out


# -- basic behaviour ----------------------------------------------------------------


def test_already_safe_is_a_zero_ply_win():
    p = parse_position("size: 4\nto_move: B\n.O.O\nOOOO\nXXXX\n.X.X\n")
    res = solve(p, GOAL, SolveConfig(max_depth=3))
    assert res.win and res.depth == 0 and res.nodes == 0
    assert set(res.zone.coords()) == {"A4", "B4", "C4", "D4", "A3", "B3", "C3", "D3"}


def test_one_move_to_live():
    p = parse_position("size: 4\nto_move: W\n....\nOOOO\nXXXX\n.X.X\n")
    res = solve(p, GOAL, SolveConfig(max_depth=1))
    assert res.win and res.depth == 1
    assert not solve(p.with_to_move(Color.BLACK), GOAL, SolveConfig(max_depth=1)).win


def test_depth_zero_and_budget():
    p = parse_position("size: 4\nto_move: W\n....\nOOOO\nXXXX\n.X.X\n")
    assert solve(p, GOAL, SolveConfig(max_depth=0)).outcome is Outcome.UNKNOWN
    big = parse_position("size: 4\nto_move: W\n....\n....\n....\n....\n")
    res = solve(big, GOAL, SolveConfig(max_depth=8, max_nodes=50))
    assert res.outcome is Outcome.UNKNOWN and res.nodes <= 51


def test_illegal_input_rejected():
    with pytest.raises(ValueError):
        solve(Position(2, 0b0011, 0b1100, Color.BLACK), GOAL)


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(max_depth=-1)
    with pytest.raises(ValueError):
        SolveConfig(table_mode="bogus")


# -- agreement with brute force ------------------------------------------------------


@pytest.mark.parametrize("mode", [TableMode.NONE, TableMode.EXACT, TableMode.RZT])
def test_outcomes_match_brute_force_4x4(mode):
    rng = random.Random(1)
    bf = BruteForce(GOAL)
    for _ in range(60):
        p = random_position(rng, 4)
        res = solve(p, GOAL, SolveConfig(max_depth=4, table_mode=mode, max_nodes=10**6))
        assert res.win == bf.wins(p, 4)
        if res.win:
            assert res.depth <= 4 and bf.wins(p, res.depth)


@pytest.mark.parametrize("storage,timestamps", [(Mode.RADIX, True), (Mode.RADIX, False), (Mode.LINEAR, True)])
def test_shared_solver_matches_brute_force_3x3(storage, timestamps):
    rng = random.Random(2)
    positions = rng.sample(all_3x3(), 1500)
    bf = BruteForce(GOAL)
    s = Solver(GOAL, SolveConfig(max_depth=6, storage=storage, timestamps=timestamps, max_nodes=10**8), side=3)
    for p in positions:
        assert s.solve(p).win == bf.wins(p, 6)
    assert s.rzt_wins > 0


def test_black_as_or_player():
    goal = Goal(Color.BLACK)
    rng = random.Random(3)
    bf = BruteForce(goal)
    for _ in range(40):
        p = random_position(rng, 4, pw=0.25, pb=0.45)
        assert solve(p, goal, SolveConfig(max_depth=4)).win == bf.wins(p, 4)


# -- zones satisfy the relevance-zone property ------------------------------------------


def test_returned_zone_covers_every_completion():
    rng = random.Random(4)
    bf = BruteForce(GOAL)
    checked = 0
    for _ in range(40):
        p = random_position(rng, 4)
        res = solve(p, GOAL, SolveConfig(max_depth=5))
        if not res.win or 16 - len(res.zone) > 7:
            continue
        v = verify_rzp(pattern_from(p, res.zone), 4, res.depth, 10**5, GOAL, bf)
        assert v.verdict is Verdict.VERIFIED
        checked += 1
    assert checked >= 10


def test_every_inserted_pattern_verifies():
    rng = random.Random(5)
    bf = BruteForce(GOAL)
    n = 0
    for _ in range(25):
        s = Solver(GOAL, SolveConfig(max_depth=5), side=4)
        s.solve(random_position(rng, 4))
        for phi, depth in s.inserted_patterns():
            if 16 - len(phi.zone) <= 7:
                assert verify_rzp(phi, 4, depth, 10**5, GOAL, bf).verdict is Verdict.VERIFIED
                n += 1
    assert n > 100


def test_rzt_never_adds_nodes():
    rng = random.Random(6)
    fewer = 0
    for _ in range(30):
        p = random_position(rng, 4)
        cfg = dict(max_depth=5, max_nodes=10**6)
        tt = solve(p, GOAL, SolveConfig(table_mode=TableMode.EXACT, **cfg))
        rz = solve(p, GOAL, SolveConfig(table_mode=TableMode.RZT, **cfg))
        assert tt.outcome == rz.outcome
        assert rz.nodes <= tt.nodes
        fewer += rz.nodes < tt.nodes
    assert fewer > 0


# -- zone construction rules -------------------------------------------------------------


def test_footprint_of_capture_includes_captured_block_and_its_surroundings():
    p = parse_position("size: 3\nto_move: W\nX..\nOXO\nOOO\n")
    m = parse_point("B3", 3)
    assert captured_by(p, m) == 1 << parse_point("B2", 3) | 1 << parse_point("A3", 3)
    fp = move_footprint(p, m)
    for pt in ("B3", "B2", "A3", "A2", "C2", "B1", "C3"):
        assert fp >> parse_point(pt, 3) & 1, pt


def test_footprint_of_surviving_neighbour_includes_its_liberties():
    p = parse_position("size: 3\nto_move: W\n...\n.X.\n...\n")
    fp = move_footprint(p, parse_point("B3", 3))
    for pt in ("B3", "B2", "A2", "C2", "B1", "A3", "C3"):
        assert fp >> parse_point(pt, 3) & 1, pt


def test_footprint_of_suicide_pins_the_surroundings():
    p = parse_position("size: 3\nto_move: W\n.X.\nX..\n...\n")
    m = parse_point("A3", 3)
    fp = move_footprint(p, m)
    for pt in ("A3", "B3", "A2", "C3", "B2", "A1"):
        assert fp >> parse_point(pt, 3) & 1, pt
    # whatever agrees on the footprint keeps the move suicidal
    for q in completions(ZonePattern(p.to_move, Zone(3, fp), p.black & fp, p.white & fp)):
        assert not any(mm == m for mm in solver_mod.legal_moves(q))


def test_rz_for_or_win_dilates_child_zone():
    p = parse_position("size: 4\nto_move: W\n....\nOOOO\nXXXX\n.X.X\n")
    m = parse_point("B4", 4)
    child = GOAL.safe_zone(play(p, m))
    z = rz_for_or_win(p, m, child)
    assert child <= z and m in z
    assert rz_for_or_win(p, PASS, child) == child


def test_liberty_closure_adds_block_and_liberties():
    p = parse_position("size: 3\nto_move: B\n.O.\n.O.\nXXX\n")
    b3 = parse_point("B3", 3)
    mask = liberty_closure(p, 1 << b3, Color.WHITE)
    for pt in ("B3", "B2", "A3", "C3", "A2", "C2"):
        assert mask >> parse_point(pt, 3) & 1, pt
    # already has an in-zone liberty: unchanged
    start = 1 << b3 | 1 << parse_point("A3", 3)
    assert liberty_closure(p, start, Color.WHITE) == start


def test_rz_for_and_win_fails_on_unrefuted_move():
    p = parse_position("size: 3\nto_move: B\n...\n...\n...\n")
    assert rz_for_and_win(p, Zone(3, 1), lambda m: solver_mod.SolveResult(Outcome.UNKNOWN)) is None


def test_omitting_captured_stones_is_caught_by_verification(monkeypatch):
    """Mutation: drop captured points from OR-win zones; exhaustive
    verification must find a completion that is not a win."""
    original = solver_mod.rz_for_or_win

    def truncated(p, m, child_zone):
        z = original(p, m, child_zone)
        if m == PASS:
            return z
        return Zone(p.side, z.mask & ~captured_by(p, m))

    monkeypatch.setattr(solver_mod, "rz_for_or_win", truncated)
    p = parse_position("size: 3\nto_move: W\nX..\nOXO\nOOO\n")
    s = Solver(GOAL, SolveConfig(max_depth=4), side=3)
    assert s.solve(p).win
    bf = BruteForce(GOAL)
    verdicts = [verify_rzp(phi, 3, d, 10**5, GOAL, bf) for phi, d in s.inserted_patterns()]
    bad = [v for v in verdicts if v.verdict is Verdict.COUNTEREXAMPLE]
    assert bad
    assert not bf.wins(bad[0].counterexample, 4)


# -- oracles ----------------------------------------------------------------------------


def test_completions_enumerate_outside_points():
    phi = ZonePattern(Color.BLACK, Zone.of(2, [0, 1, 2]), 0, 0)
    qs = list(completions(phi))
    assert all(matches(q, phi) and is_legal_position(q) for q in qs)
    assert len(qs) == 3  # D? point empty, black or white; all legal with three empties around


def test_verify_budget():
    phi = ZonePattern(Color.WHITE, Zone(4), 0, 0)
    v = verify_rzp(phi, 4, 1, 5, GOAL)
    assert v.verdict in (Verdict.BUDGET_EXCEEDED, Verdict.COUNTEREXAMPLE)
    assert v.checked <= 5


def test_brute_force_depth_monotone():
    rng = random.Random(7)
    bf = BruteForce(GOAL)
    for _ in range(30):
        p = random_position(rng, 3)
        wins = [bf.wins(p, d) for d in range(6)]
        assert wins == sorted(wins)
        assert brute_force_solve(p, GOAL, 5, bf) is (Outcome.WIN if wins[5] else Outcome.UNKNOWN)
