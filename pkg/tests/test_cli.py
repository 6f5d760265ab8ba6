import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dzeta.cli import (
    ACCEPTANCE_CASES,
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_PROXY,
    EXIT_SINGULAR,
    VERIFY_CASES,
    format_complex,
    main,
    parse_complex,
)


class TestComplexParsing:
    def test_forms(self):
        assert parse_complex("2+0i") == 2.0
        assert parse_complex("0.5-3i") == complex(0.5, -3.0)
        assert parse_complex("-1.5+2.25i") == complex(-1.5, 2.25)
        assert parse_complex("1e-3+2e2i") == complex(1e-3, 200.0)
        assert parse_complex("3") == 3.0

    def test_rejects_garbage(self):
        import argparse
        for bad in ("2 + 3i", "i", "1+i2", "abc"):
            with pytest.raises(argparse.ArgumentTypeError):
                parse_complex(bad)

    @given(st.complex_numbers(max_magnitude=1e6, allow_nan=False,
                              allow_infinity=False))
    def test_round_trip(self, z):
        assert parse_complex(format_complex(z)) == z


class TestEval:
    def test_stuffle_value(self, capsys):
        code = main(["eval", "--s1", "2+0i", "--s2", "2+0i"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        value = float(out.splitlines()[0].split("=")[1])
        assert value == pytest.approx(math.pi ** 4 / 120.0, abs=1e-9)
        assert "split = brute" in out

    def test_euler_identity_json(self, capsys):
        code = main(["eval", "--s1", "1+0i", "--s2", "2+0i", "--format", "json"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["value_re"] == pytest.approx(1.2020569031595943, abs=1e-9)

    def test_explicit_split(self, capsys):
        code = main(["eval", "--s1", "0.9+10i", "--s2", "0.9+0i",
                     "--split", "v"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "split = v_split" in out
        assert "err = " in out

    def test_singular_exit(self, capsys):
        code = main(["eval", "--s1", "1+0i", "--s2", "1+0i"])
        assert code == EXIT_SINGULAR
        assert "singular" in capsys.readouterr().err

    def test_domain_exit(self, capsys):
        code = main(["eval", "--s1", "0.2+0i", "--s2", "0.2+0i"])
        assert code == EXIT_DOMAIN
        assert "sigma1 + sigma2 > 1" in capsys.readouterr().err

    def test_plain_numbers_round_trip_through_json(self, capsys):
        main(["eval", "--s1", "1.3+2i", "--s2", "1.4-1i"])
        plain = capsys.readouterr().out
        main(["eval", "--s1", "1.3+2i", "--s2", "1.4-1i", "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        plain_map = {}
        for line in plain.splitlines():
            key, _, value = line.partition(" = ")
            plain_map[key] = value
        assert float(plain_map["value_re"]) == doc["value_re"]
        assert float(plain_map["value_im"]) == doc["value_im"]
        assert float(plain_map["err"]) == doc["err"]


class TestSeries:
    def test_z2box_hand_value(self, capsys):
        code = main(["series", "--which", "z2box", "--sigma1", "1",
                     "--sigma2", "1", "--K", "4"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        value = float(out.splitlines()[0].split("=")[1])
        assert value == pytest.approx(61.0 / 144.0, abs=1e-14)
        assert "tail_bound" in out

    def test_z2box_boundary_exit(self, capsys):
        code = main(["series", "--which", "z2box", "--sigma1", "2",
                     "--sigma2", "0.5"])
        assert code == EXIT_DOMAIN
        assert "sigma2 > 1/2" in capsys.readouterr().err

    def test_z22(self, capsys):
        code = main(["series", "--which", "z22", "--s1", "2+0i",
                     "--two-sigma2", "4"])
        assert code == EXIT_OK
        value = float(capsys.readouterr().out.splitlines()[0].split("=")[1])
        assert value == pytest.approx(0.0967070757092829, abs=1e-9)

    def test_z21(self, capsys):
        code = main(["series", "--which", "z21", "--two-sigma1", "4",
                     "--s2", "2+0i"])
        assert code == EXIT_OK

    def test_missing_flags(self, capsys):
        code = main(["series", "--which", "z21"])
        assert code == EXIT_DOMAIN
        assert "--two-sigma1" in capsys.readouterr().err


class TestVerify:
    def test_named_case_writes_reports(self, tmp_path, capsys):
        code = main(["verify", "--case", "i2-convergent", "--Tmax", "64",
                     "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "i2-convergent: pass" in out
        csv_path = tmp_path / "report-i2-convergent.csv"
        json_path = tmp_path / "report-i2-convergent.json"
        assert csv_path.exists() and json_path.exists()
        doc = json.loads(json_path.read_text())
        assert doc["proxy"]["passed"] is True
        header = csv_path.read_text().splitlines()[0]
        assert header == "T,integral,main,residual,scaled_residual,quad_err"

    def test_unknown_case(self, capsys):
        code = main(["verify", "--case", "nope"])
        assert code == EXIT_DOMAIN

    def test_deterministic_output(self, tmp_path):
        args = ["verify", "--case", "i1-subcritical", "--Tmax", "48",
                "--seed", "7"]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        a = (tmp_path / "a" / "report-i1-subcritical.csv").read_bytes()
        b = (tmp_path / "b" / "report-i1-subcritical.csv").read_bytes()
        assert a == b

    def test_explicit_grid(self, tmp_path, capsys):
        code = main(["verify", "--case", "ibox-convergent",
                     "--Tgrid", "16,32,64", "--out", str(tmp_path)])
        assert code == EXIT_OK
        doc = json.loads((tmp_path / "report-ibox-convergent.json").read_text())
        assert [row["T"] for row in doc["rows"]] == [16.0, 32.0, 64.0]

    def test_acceptance_names_registered(self):
        for name in ACCEPTANCE_CASES:
            assert name in VERIFY_CASES


class TestConfigFile:
    def test_defaults_from_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# settings\nformat=json\ntol=1e-9\n")
        code = main(["--config", str(cfg), "eval", "--s1", "2+0i",
                     "--s2", "2+0i"])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)  # json came from the file
        assert "value_re" in doc

    def test_flag_overrides_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("format=json\n")
        code = main(["--config", str(cfg), "--format", "plain",
                     "eval", "--s1", "2+0i", "--s2", "2+0i"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("value_re = ")

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frobnicate=1\n")
        code = main(["--config", str(cfg), "eval", "--s1", "2+0i",
                     "--s2", "2+0i"])
        assert code == EXIT_DOMAIN
        assert "unknown config key" in capsys.readouterr().err
