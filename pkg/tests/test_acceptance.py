"""One test per acceptance criterion; each must pass exactly."""
import pytest

from cychom.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [k for k, _, _ in CRITERIA],
                         ids=["%02d-%s" % (k, fn.__name__.split("_", 1)[1]) for k, _, fn in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    assert result["passed"], result
