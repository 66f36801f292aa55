"""Python-facing smoke tests for the native module."""

import voqsim


def test_turn_enumeration():
    combos = voqsim.enumerate_turn_combinations()
    assert len(combos) == 12
    assert all(len(pair) == 2 for pair in combos)


def test_turn_classification():
    assert voqsim.classify_turn("S", "E") == "clockwise"
    assert voqsim.classify_turn("S", "W") == "counterclockwise"
    assert voqsim.classify_turn("S", "N") == "straight"
    assert voqsim.classify_turn("C", "E") == "ingress"


def test_admissible_outputs():
    assert voqsim.admissible_outputs(8, 8, (2, 3), (5, 3)) == ["E"]
    assert set(voqsim.admissible_outputs(8, 8, (2, 3), (4, 5))) == {"E", "N"}
    assert voqsim.admissible_outputs(8, 8, (4, 5), (4, 5)) == ["C"]


def test_freedom_condition_worked_example():
    # Capacity 8, feeders 2+1+3, restricted queue 2, incoming size 1: 9 > 8.
    assert not voqsim.freedom_condition(8, 1, 2, [2, 1, 3])
    assert voqsim.freedom_condition(8, 1, 1, [2, 1, 3])
    assert voqsim.freedom_condition(8, 3, 2, [1, 1, 0])
    assert not voqsim.freedom_condition(8, 3, 2, [1, 1, 0], claims=2)


def test_simulate_and_determinism():
    kw = dict(
        width=4,
        height=4,
        algorithm="xy-adaptive",
        pattern="uniform",
        rate=0.3,
        warmup=100,
        roi=1000,
        seed=5,
    )
    a = voqsim.simulate(**kw)
    b = voqsim.simulate(**kw)
    assert a["delivered"] > 0
    assert not a["deadlock"]
    assert a == b


def test_sweep_rows_and_csv():
    rows = voqsim.sweep(
        rates=[0.1, 0.2],
        seeds=[1, 2],
        width=4,
        height=4,
        algorithm="xy",
        pattern="transpose",
        warmup=100,
        roi=500,
    )
    # Two seeds plus a mean row per rate.
    assert len(rows) == 6
    assert [r["seed"] for r in rows[:3]] == [1, 2, "mean"]
    csv = voqsim.sweep_csv(
        rates=[0.1],
        seeds=[1],
        width=4,
        height=4,
        algorithm="xy",
        pattern="transpose",
        warmup=100,
        roi=500,
    )
    assert csv.splitlines()[0].startswith("algorithm,pattern,mode,rate,seed")
    assert len(csv.splitlines()) == 3


def test_full_freedom_is_deadlock_prone_and_gating_fixes_it():
    base = dict(
        width=3,
        height=4,
        capacity=2,
        pattern="uniform",
        rate=0.5,
        packet_size=2,
        warmup=0,
        roi=30000,
        latency_threshold=0,
        seed=2,
    )
    prone = voqsim.simulate(algorithm="full-freedom", **base)
    assert prone["deadlock"]
    safe = voqsim.simulate(algorithm="xy-adaptive", **base)
    assert not safe["deadlock"]
