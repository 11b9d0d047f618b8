import pytest

from qsense.config import CONFIG, DEFAULT_CONFIG_FILE, Config


def test_default_sections():
    for section in ("logging", "propagation", "quadrature", "root_finding", "control", "montecarlo", "constants",
                    "cli"):
        assert section in CONFIG
    assert CONFIG["constants"]["hbar"] == pytest.approx(1.054571817e-34)


def test_config_is_read_only():
    with pytest.raises(NotImplementedError):
        CONFIG["cli"] = {}
    with pytest.raises(NotImplementedError):
        del CONFIG["cli"]


def test_reload_from_other_file(tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("montecarlo:\n  seed: 7\n")
    config = Config(DEFAULT_CONFIG_FILE)
    config.reload(path)
    assert config["montecarlo"]["seed"] == 7
    assert len(config) == 1
    config.reload(DEFAULT_CONFIG_FILE)
    assert config["montecarlo"]["seed"] == 42
