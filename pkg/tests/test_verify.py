from dataclasses import replace

import pytest

from lanesim.scenarios import preset
from lanesim.verify import Check, all_enforced_pass, verify_config

ENFORCED = {"invariance", "mass_conservation", "cfl", "time_sum", "entropy_inequality",
            "bv_in_space", "lipschitz_in_time", "source_bound"}


@pytest.mark.parametrize("name, index", [("two_lane_local_flux", 1),
                                         ("nonlocal_flux_bump", 1),
                                         ("source_kernel_cases", 0)])
def test_short_runs_pass(name, index):
    cfg = replace(preset(name)[index], T=0.2, snapshot_times=())
    checks = verify_config(cfg)
    assert {c.check_name for c in checks if c.enforced} == ENFORCED
    assert all_enforced_pass(checks), [c.as_dict() for c in checks if not c.passed]


def test_observations_do_not_gate():
    checks = [Check("a", -1.0, True), Check("observation:b", 0.3, False, enforced=False)]
    assert all_enforced_pass(checks)
    assert not all_enforced_pass(checks + [Check("c", 1.0, False)])


def test_report_keys():
    d = Check("cfl", -0.0, True).as_dict()
    assert d == {"check_name": "cfl", "max_violation": 0.0, "pass": True, "enforced": True}
