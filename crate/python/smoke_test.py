"""Smoke test for the tldiag Python module. Run with `python python/smoke_test.py` or pytest."""

import tldiag


def test_map_and_factor():
    w = [3, 5, 2, 4, 0, 1, 3, 5, 2, 4, 5]
    assert tldiag.is_fully_commutative(w, "B", 4)
    d = tldiag.theta(w, "B", 4)
    assert d.k == 6 and d.is_admissible()
    assert d.length() == len(w)
    back = tldiag.theta(d.factorize(), "B", 4)
    assert back == d and hash(back) == hash(d)


def test_json_round_trip():
    d = tldiag.theta([0, 2, 1, 3], "D", 3)
    assert tldiag.Diagram.from_json(d.to_json(), "D", 3) == d


def test_multiply_and_identity():
    e1 = tldiag.simple(1)
    [(coeff, diagram)] = e1 * e1
    assert coeff == [0, 1] and diagram == e1
    one = tldiag.Diagram.identity()
    assert e1 * one == [([1], e1)]


def test_classify_and_render():
    d = tldiag.theta([8, 7, 6, 5, 4, 8, 7, 6, 5, 8, 3, 2, 0, 1, 2, 3, 4, 7, 8, 6, 7, 8, 5, 6], "B", 7)
    c = d.classify()
    assert c["tag"] == "LP" and c["j_l"] == 3
    assert d.svg().startswith("<svg")
    assert "│" in tldiag.Diagram.identity().ascii()


def test_errors_and_enumeration():
    try:
        tldiag.theta([1, 2, 1])
    except ValueError as e:
        assert "fully commutative" in str(e)
    else:
        raise AssertionError("non-FC word accepted")
    counts = [len(level) for level in tldiag.fc_enum("B", 2, 3)]
    assert counts == [1, 4, 9, 15]


def test_verify():
    report = tldiag.verify("B", 2, 6, 1)
    assert report["checks"] and all(c["pass"] for c in report["checks"])


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
