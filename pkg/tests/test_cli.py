"""Tests for the command line front end and the config file grammar."""

import pytest

from onebit_mimo.cli import (
    build_parser,
    main,
    parse_config_file,
    resolve_settings,
    sweep_config_from_settings,
)
from onebit_mimo.sim import CSV_HEADER


def _settings(argv):
    return resolve_settings(build_parser().parse_args(argv))


class TestConfigFile:
    def test_parses_flat_grammar(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(
            "# SNR sweep for the small rig\n"
            "bs_antennas = 8\n"
            "ues = 2\n"
            "snr_db = 0, 5, 10   # dB\n"
            "precoder = zfq,squid\n"
            "sdr.block_mode = true\n"
            "\n"
        )
        values = parse_config_file(cfg)
        assert values["bs_antennas"] == "8"
        assert values["snr_db"] == "0, 5, 10"
        assert values["sdr.block_mode"] == "true"

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("antennas = 8\n")
        with pytest.raises(ValueError, match="unknown key"):
            parse_config_file(cfg)

    def test_missing_equals_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bs_antennas 8\n")
        with pytest.raises(ValueError, match="key = value"):
            parse_config_file(cfg)

    def test_cli_overrides_file_overrides_defaults(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("bs_antennas = 8\ntrials = 4\nseed = 3\n")
        settings = _settings(["--config", str(cfg), "--trials", "9"])
        assert settings["bs_antennas"] == 8   # from file
        assert settings["trials"] == 9        # CLI wins
        assert settings["seed"] == 3          # from file
        assert settings["ues"] == 16          # default


class TestSweepConfigMapping:
    def test_lists_and_solver_options(self, tmp_path):
        cfg_file = tmp_path / "s.cfg"
        cfg_file.write_text("squid.max_iters = 123\nsdr.tol = 1e-4\n")
        settings = _settings([
            "--config", str(cfg_file),
            "--bs-antennas", "4", "--ues", "2", "--slots", "2",
            "--snr-db", "0,6", "--precoder", "zfq, squid",
            "--constellation", "QPSK", "--estimator", "genie",
            "--trials", "2", "--seed", "1", "--out", str(tmp_path / "o.csv"),
        ])
        sweep_cfg = sweep_config_from_settings(settings)
        assert sweep_cfg.snr_db == (0.0, 6.0)
        assert sweep_cfg.precoders == ("zfq", "squid")
        assert sweep_cfg.constellation == "qpsk"
        assert sweep_cfg.squid.max_iters == 123
        assert sweep_cfg.sdr.tol == 1e-4
        assert sweep_cfg.stop_after_errors is None

    def test_stop_after_errors_zero_disables(self):
        settings = _settings(["--stop-after-errors", "0"])
        assert sweep_config_from_settings(settings).stop_after_errors is None

    def test_negative_snr_list_with_equals_form(self):
        settings = _settings(["--snr-db=-8,-4,0"])
        assert sweep_config_from_settings(settings).snr_db == (-8.0, -4.0, 0.0)


class TestMain:
    ARGS = ["--bs-antennas", "4", "--ues", "2", "--slots", "2",
            "--snr-db", "0,8", "--precoder", "zfq",
            "--constellation", "qpsk", "--estimator", "blind",
            "--trials", "3", "--seed", "2"]

    def test_writes_csv_and_exits_zero(self, tmp_path, capsys):
        out = tmp_path / "ber.csv"
        code = main(self.ARGS + ["--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 3  # header + 2 SNR points x 1 precoder
        assert "wrote" in capsys.readouterr().out

    def test_reruns_are_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(self.ARGS + ["--out", str(out1)])
        main(self.ARGS + ["--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_hard_failures_exit_nonzero(self, tmp_path, capsys):
        # brute force guard trips at B=16, so every trial fails hard
        code = main(["--bs-antennas", "16", "--ues", "2", "--slots", "1",
                     "--snr-db", "0", "--precoder", "bruteforce",
                     "--trials", "1", "--seed", "0",
                     "--out", str(tmp_path / "f.csv")])
        assert code == 1
        assert "failed" in capsys.readouterr().err
