import pytest

from repsim.core import (
    GlobalParams,
    InvariantViolation,
    NodeParams,
    RateObservation,
    validate_observation,
)


def obs(**kw):
    base = dict(requester=0, server=1, requested=10.0, willing=8.0,
                delivered=4.0, feasible=9.0, accepted=8.0, iteration=0)
    base.update(kw)
    return RateObservation(**base)


PARAMS = NodeParams(node=0, download_capacity=100.0)


class TestValidateObservation:
    def test_accepts_consistent_observation(self):
        o = obs()
        assert validate_observation(o, PARAMS) is o

    def test_delivered_above_accepted_feasible_min(self):
        with pytest.raises(InvariantViolation, match="delivered exceeds"):
            validate_observation(obs(delivered=9.0, accepted=8.0, feasible=9.0), PARAMS)

    def test_request_above_download_capacity(self):
        with pytest.raises(InvariantViolation, match="exceeds download capacity"):
            validate_observation(obs(requested=120.0, willing=100.0), PARAMS)

    def test_willing_above_requested(self):
        with pytest.raises(InvariantViolation, match="willing"):
            validate_observation(obs(willing=11.0), PARAMS)

    def test_zero_request_rejected(self):
        with pytest.raises(InvariantViolation, match="requested"):
            validate_observation(
                obs(requested=0.0, willing=0.0, delivered=0.0), PARAMS)

    def test_negative_rate_named(self):
        with pytest.raises(InvariantViolation, match="feasible"):
            validate_observation(obs(feasible=-1.0, delivered=0.0), PARAMS)


class TestParams:
    def test_global_params_bounds(self):
        GlobalParams()  # defaults are valid
        with pytest.raises(InvariantViolation):
            GlobalParams(exponent=0.0)
        with pytest.raises(InvariantViolation):
            GlobalParams(exponent=1.5)
        with pytest.raises(InvariantViolation):
            GlobalParams(eta=1.0)
        with pytest.raises(InvariantViolation):
            GlobalParams(smoothing=0.0)

    def test_node_params_bounds(self):
        with pytest.raises(InvariantViolation):
            NodeParams(node=0, download_capacity=0.0)
        with pytest.raises(InvariantViolation):
            NodeParams(node=0, download_capacity=10.0, multiplier=0.5)
