import pytest

from simplexcount.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("ident", sorted(CRITERIA))
def test_criterion(ident):
    res = run_criterion(ident)
    print(res.line())
    assert res.passed, res.detail


if __name__ == "__main__":
    import sys

    from simplexcount.acceptance import run_all

    results = run_all(report=lambda r: print(r.line(), flush=True))
    sys.exit(0 if all(r.passed for r in results) else 1)
