import pytest

from wh_ensembles import __version__
from wh_ensembles.exceptions import ArgumentDomainError, EnsembleException
from wh_ensembles.options import ExperimentConfig, workers_from_environment

from .mockers import overridden_environment


class TestExperimentConfig:

    def test_defaults_are_valid(self) -> None:
        config = ExperimentConfig()
        config.validate()
        assert config.opt_window == "hermite:0"
        assert config.opt_seed == 20240601

    @pytest.mark.parametrize("option,value", [
        ("opt_basis", 0), ("opt_quad", -3), ("opt_seed", -1), ("opt_seed", 2 ** 64), ("opt_samples", -1),
        ("opt_workers", 0), ("opt_r", -1), ("opt_n", [3, 0]), ("opt_areas", [1.0, -2.0]), ("opt_delta", 1.0),
        ("opt_grid", 1), ("opt_scales", [0.0]), ("opt_area", 0.0),
    ])
    def test_invalid_values(self, option: str, value: object) -> None:
        config = ExperimentConfig()
        setattr(config, option, value)
        with pytest.raises(ArgumentDomainError):
            config.validate()

    def test_area_needs_a_single_n(self) -> None:
        config = ExperimentConfig()
        config.opt_area = 0.5
        with pytest.raises(ArgumentDomainError):
            config.validate()
        config.opt_n = [1]
        config.validate()

    def test_provenance(self) -> None:
        config = ExperimentConfig()
        config.opt_command = "compare"
        config.opt_n = [25, 100]
        config.opt_out = "somewhere"
        config.opt_workers = 4
        provenance = dict(config.provenance())
        assert provenance["wh-ensembles"] == __version__
        assert provenance["command"] == "compare"
        assert provenance["N"] == "25,100"
        assert provenance["delta"] == "0.5"
        assert provenance["check"] == "false"
        assert "out" not in provenance and "workers" not in provenance


class TestEnvironment:

    def test_workers(self) -> None:
        with overridden_environment(WH_ENSEMBLES_WORKERS="3"):
            assert workers_from_environment() == 3
            assert ExperimentConfig().opt_workers == 3
        with overridden_environment(WH_ENSEMBLES_WORKERS=""):
            assert workers_from_environment() == 1
        with overridden_environment(WH_ENSEMBLES_WORKERS="many"):
            with pytest.raises(EnsembleException):
                workers_from_environment()
