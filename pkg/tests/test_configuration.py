"""
Tests for configuration_manager.py - Configuration loading and validation.
"""
import pytest


@pytest.mark.unit
class TestConfigurationLoading:
    """Test configuration file loading."""

    def test_defaults_load(self):
        """Test that defaults.cfg is read from the config directory."""
        import configuration_manager as cm

        config = cm.Configuration()
        assert any(f.endswith('defaults.cfg') for f in config.loaded_files)

    def test_tolerance_section_loads(self):
        """Test that the tolerance record carries every documented key."""
        import configuration_manager as cm

        tols = cm.Configuration().tolerances
        assert tols.eq_tol == 1e-10
        assert tols.eig_tol == 1e-13
        assert tols.max_sweeps == 100
        assert tols.ppt_tol == 1e-10
        assert tols.verdict_margin == 1e-10

    def test_sampling_and_criteria_sections_load(self):
        """Test the sampling and criteria defaults."""
        import configuration_manager as cm

        config = cm.Configuration()
        assert config.sampling.probes == 10
        assert 'rng_algorithm' not in config.sampling.config
        assert config.criteria.b_side == 'conjugate'
        assert config.criteria.collective_materialize_limit == 12
        assert config.report.schmidt_orders == [2, 3, 4, 5]

    def test_override_file_wins(self, write_config):
        """Test that an override file is layered over the defaults."""
        import configuration_manager as cm

        path = write_config("[criteria]\nb_side = same\n\n[tolerances]\nimag_tol = 1e-8\n")
        config = cm.Configuration(path)
        assert config.criteria.b_side == 'same'
        assert config.tolerances.imag_tol == 1e-8
        # untouched keys keep their defaults
        assert config.tolerances.eq_tol == 1e-10

    def test_missing_override_keeps_defaults(self, tmp_path):
        """Test that a missing override file is not fatal."""
        import configuration_manager as cm

        config = cm.Configuration(str(tmp_path / "nope.cfg"))
        assert config.criteria.b_side == 'conjugate'


@pytest.mark.unit
class TestConfigurationValidation:
    """Test rejection and correction of bad values."""

    def test_non_positive_tolerance_rejected(self, write_config):
        """Test that a zero tolerance is a ValueError."""
        import configuration_manager as cm

        path = write_config("[tolerances]\neq_tol = 0\n")
        with pytest.raises(ValueError):
            cm.Configuration(path)

    def test_bad_b_side_falls_back(self, write_config):
        """Test that an unknown b_side reverts to conjugate."""
        import configuration_manager as cm

        path = write_config("[criteria]\nb_side = sideways\n")
        assert cm.Configuration(path).criteria.b_side == 'conjugate'

    def test_bad_log_level_falls_back(self, write_config):
        """Test that an unknown log level reverts to WARNING."""
        import configuration_manager as cm

        path = write_config("[logging]\nlog_level = chatty\n")
        assert cm.Configuration(path).logging.log_level == 'WARNING'


@pytest.mark.unit
class TestActiveConfiguration:
    """Test the cached configuration used by the library."""

    def test_cached_instance(self):
        """Test that repeated lookups share one instance."""
        import configuration_manager as cm

        assert cm.get_configuration() is cm.get_configuration()

    def test_param_config_reloads(self, write_config):
        """Test that an explicit override file forces a reload."""
        import configuration_manager as cm

        first = cm.get_configuration()
        second = cm.get_configuration(write_config("[tolerances]\neq_tol = 1e-9\n"))
        assert second is not first
        assert cm.tolerances().eq_tol == 1e-9

    def test_reset(self):
        """Test that reset drops the cached instance."""
        import configuration_manager as cm

        first = cm.get_configuration()
        cm.reset_configuration()
        assert cm.get_configuration() is not first

    def test_section_attributes(self):
        """Test that every section key is readable as an attribute."""
        import configuration_manager as cm

        values = {'a': 1, 'b': 'x'}
        section = cm.Section(values)
        assert section.a == 1
        assert section.b == 'x'
        assert section.config == values
        assert section.config is not values
