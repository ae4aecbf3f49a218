import json

import numpy as np
import pytest

from covchan import cli

from conftest import FIXTURES


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_covariant_channel_passes(self, capsys):
        code, out, _ = run(capsys, "check",
                           str(FIXTURES / "amplitude_damping_0.3.json"),
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["covariance_defect"] < 1e-12
        assert payload["tp_defect"] < 1e-12

    def test_non_covariant_exit_1(self, capsys):
        code, out, _ = run(capsys, "check",
                           str(FIXTURES / "hadamard_gate_channel.json"),
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_VIOLATION
        assert abs(json.loads(out)["covariance_defect"] - 0.5) < 1e-12

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run(capsys, "check", "/nonexistent.json",
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_USAGE
        assert "not found" in err

    def test_malformed_json_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        code, _, err = run(capsys, "check", str(bad),
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_USAGE
        assert "parse error" in err


class TestDecompose:
    def test_amplitude_damping(self, capsys):
        code, out, _ = run(capsys, "decompose",
                           str(FIXTURES / "amplitude_damping_0.3.json"),
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        sigmas = sorted(s["sigma"] for s in payload["sectors"])
        assert sigmas == [-1.0, 0.0]
        np.testing.assert_allclose(payload["diagonal_sums"], 1.0, atol=1e-10)
        assert payload["reconstruction_choi_distance"] < 1e-10

    def test_non_covariant_exit_1(self, capsys):
        code, _, err = run(capsys, "decompose",
                           str(FIXTURES / "hadamard_gate_channel.json"),
                           str(FIXTURES / "spectrum_2level.json"))
        assert code == cli.EXIT_VIOLATION
        assert "not covariant" in err

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "decomp.json"
        code, out, _ = run(capsys, "decompose",
                           str(FIXTURES / "amplitude_damping_0.3.json"),
                           str(FIXTURES / "spectrum_2level.json"),
                           "--out", str(dest))
        assert code == cli.EXIT_OK
        assert dest.read_text().strip() == out.strip()


class TestCapacity:
    def test_mask_input(self, capsys):
        code, out, _ = run(capsys, "capacity",
                           str(FIXTURES / "mask_c_sqrt_half.json"))
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["hadamard_bound_bits"] == pytest.approx(0.3991, abs=5e-5)
        assert payload["verify_hqc_difference"] < 1e-9

    def test_channel_input(self, capsys):
        code, out, _ = run(capsys, "capacity",
                           str(FIXTURES / "identity_channel.json"))
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert payload["coherent_information_bits"] == pytest.approx(1.0, abs=1e-10)
        assert payload["hadamard_bound_bits"] is None

    def test_explicit_input_state(self, capsys):
        code, out, _ = run(capsys, "capacity",
                           str(FIXTURES / "identity_channel.json"),
                           "--input-state", str(FIXTURES / "plus_state.json"))
        assert code == cli.EXIT_OK
        # pure input through the identity: zero coherent information? no:
        # S(rho) = 0 and joint stays pure, I_c = 0.
        assert json.loads(out)["coherent_information_bits"] == pytest.approx(0.0, abs=1e-9)


class TestTiming:
    def test_worked_example(self, capsys):
        code, out, _ = run(capsys, "timing",
                           str(FIXTURES / "shift_mixture_channel.json"),
                           str(FIXTURES / "spectrum_4level.json"),
                           "--phi0", str(FIXTURES / "phi0_4level.json"),
                           "--s", str(np.pi), "--N", "2")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        np.testing.assert_allclose(payload["q"], [1.0, 0.0], atol=1e-10)
        assert payload["bound_bits"] == pytest.approx(1.0, abs=1e-10)

    def test_unreliable_exit_1(self, capsys):
        # At s = pi/2 adjacent translates of phi0 overlap, so the N = 4 orbit
        # outputs are not pairwise orthogonal.
        code, _, err = run(capsys, "timing",
                           str(FIXTURES / "shift_mixture_channel.json"),
                           str(FIXTURES / "spectrum_4level.json"),
                           "--phi0", str(FIXTURES / "phi0_4level.json"),
                           "--s", "1.5707963267948966", "--N", "4")
        assert code == cli.EXIT_VIOLATION
        assert "not reliable timing" in err


class TestGaussian:
    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "gaussian", "--std-dev", "0.3", "--dim", "4",
                           "--sigma-max", "2")
        assert code == cli.EXIT_OK
        payload = json.loads(out)
        assert len(payload["masks"]) == 5
        m0 = next(m for m in payload["masks"] if m["sigma"] == 0.0)
        assert m0["mask"]["data"][0][0] == pytest.approx(1.0 / 1.18, abs=1e-10)

    def test_csv_output(self, capsys):
        code, out, _ = run(capsys, "gaussian", "--std-dev", "0.3", "--dim", "3",
                           "--sigma-max", "1", "--format", "csv")
        assert code == cli.EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0].startswith("matrix,row,")
        assert any(line.startswith("mask_sigma_-1,") for line in lines)

    def test_bad_flags_exit_2(self, capsys):
        code, _, _ = run(capsys, "gaussian", "--dim", "4")
        assert code == cli.EXIT_USAGE


class TestMcGaussian:
    def test_agreement_and_determinism(self, capsys):
        args = ("mc-gaussian", "--std-dev", "0.3", "--dim", "6",
                "--samples", "20000", "--seed", "5")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == cli.EXIT_OK
        assert out1 == out2
        assert json.loads(out1)["ok"] is True

    def test_seed_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("COVCHAN_SEED", "5")
        code, out_env, _ = run(capsys, "mc-gaussian", "--std-dev", "0.3",
                               "--dim", "6", "--samples", "20000")
        assert code == cli.EXIT_OK
        _, out_flag, _ = run(capsys, "mc-gaussian", "--std-dev", "0.3",
                             "--dim", "6", "--samples", "20000", "--seed", "5")
        assert out_env == out_flag

    def test_unknown_subcommand_exit_2(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == cli.EXIT_USAGE
