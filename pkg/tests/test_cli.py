import logging
import subprocess
import sys

import numpy as np
import pytest

from sgtv.cli import main
from sgtv.fileio import read_image, read_kspace, read_pattern, write_image
from sgtv.mri import forward
from sgtv.phantoms import noise_sigma, shepp_logan_pair


def write_config(path, **kv):
    path.write_text("".join(f"{k} = {v}\n" for k, v in kv.items()))
    return str(path)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def sim_config(tmp_path):
    return write_config(tmp_path / "sim.cfg", ground_truth="phantom:t1:32",
                        pattern="radial_golden:8", noise_fraction="0.05", seed="3")


def test_simulate_writes_files_and_sigma(tmp_path, sim_config, capsys):
    code, out, _ = run(["--config", sim_config, "simulate", "--out", tmp_path / "a"], capsys)
    assert code == 0
    fields = dict(item.split("=") for item in out.split())
    t1, _ = shepp_logan_pair(32)
    assert float(fields["sigma"]) == pytest.approx(noise_sigma(t1, 0.05), rel=1e-11)
    assert fields["seed"] == "3"
    p = read_pattern(tmp_path / "a" / "pattern.txt")
    assert len(read_kspace(tmp_path / "a" / "data.kdat")) == len(p) == int(fields["samples"])

    run(["simulate", "--config", sim_config, "--out", tmp_path / "b"], capsys)
    for name in ("pattern.txt", "data.kdat"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_simulate_noise_free_is_forward(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.cfg", ground_truth="phantom:t2:32",
                       pattern="cartesian_random:0.25", noise_fraction="0")
    assert run(["simulate", "--config", cfg, "--out", tmp_path], capsys)[0] == 0
    p = read_pattern(tmp_path / "pattern.txt")
    _, t2 = shepp_logan_pair(32)
    assert read_kspace(tmp_path / "data.kdat").tobytes() == forward(p, t2).tobytes()


def recon_config(tmp_path, **extra):
    kv = dict(data=tmp_path / "sim" / "data.kdat", pattern_file=tmp_path / "sim" / "pattern.txt",
              ground_truth="phantom:t1:32", alpha="0.01", eta="0.01", outer_iterations="30")
    kv.update(extra)
    return write_config(tmp_path / "r.cfg", **kv)


def test_reconstruct_outputs_and_repeatability(tmp_path, sim_config, capsys):
    run(["simulate", "--config", sim_config, "--out", tmp_path / "sim"], capsys)
    cfg = recon_config(tmp_path, prior="dtv", side_info="phantom:t2:32")
    for out in ("r1", "r2"):
        code, stdout, _ = run(["reconstruct", "--config", cfg, "--out", tmp_path / out], capsys)
        assert code == 0 and "ssim=" in stdout
    for name in ("recon.rimg", "diagnostics.csv", "metrics.csv"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()
    v = read_image(tmp_path / "r1" / "recon.rimg")
    assert v.shape == (32, 32) and v.min() >= 0
    diag = (tmp_path / "r1" / "diagnostics.csv").read_text().splitlines()
    assert diag[0] == "iteration,objective,primal_residual,dual_residual,rho"
    assert len(diag) == 31


def test_reconstruct_tv_ignores_side_info(tmp_path, sim_config, capsys, caplog):
    run(["simulate", "--config", sim_config, "--out", tmp_path / "sim"], capsys)
    cfg = recon_config(tmp_path, prior="tv", side_info="phantom:t2:32")
    with caplog.at_level(logging.WARNING, logger="sgtv"):
        code, _, _ = run(["reconstruct", "--config", cfg, "--out", tmp_path / "o"], capsys)
    assert code == 0
    assert any("ignoring" in r.getMessage() for r in caplog.records)


def test_reconstruct_dtv_without_side_info_is_data_error(tmp_path, sim_config, capsys):
    run(["simulate", "--config", sim_config, "--out", tmp_path / "sim"], capsys)
    cfg = recon_config(tmp_path, prior="dtv")
    code, _, err = run(["reconstruct", "--config", cfg, "--out", tmp_path / "o"], capsys)
    assert code == 2 and "side_info" in err


def test_reconstruct_requires_alpha(tmp_path, sim_config, capsys):
    run(["simulate", "--config", sim_config, "--out", tmp_path / "sim"], capsys)
    cfg = write_config(tmp_path / "r.cfg", data=tmp_path / "sim" / "data.kdat",
                       pattern_file=tmp_path / "sim" / "pattern.txt")
    assert run(["reconstruct", "--config", cfg], capsys)[0] == 1


def test_sweep_is_byte_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path / "s.cfg", ground_truth="phantom:t1:32",
                       side_info="phantom:t2:32", prior="tv, wtv, dtv",
                       pattern="cartesian_random:0.25", alpha="0.005, 0.02", eta="0.01, 1",
                       outer_iterations="15", inner_prox_iterations="5", seed="7")
    for out in ("a", "b"):
        code, stdout, _ = run(["sweep", "--config", cfg, "--out", tmp_path / out], capsys)
        assert code == 0 and stdout.count("best ") == 3
    assert (tmp_path / "a" / "stats.csv").read_bytes() == (tmp_path / "b" / "stats.csv").read_bytes()
    assert (tmp_path / "a" / "best.csv").read_bytes() == (tmp_path / "b" / "best.csv").read_bytes()
    lines = (tmp_path / "a" / "stats.csv").read_text().splitlines()
    assert len(lines) == 1 + 3 * 2 * 2


def test_metrics_and_render(tmp_path, capsys):
    a = np.full((16, 16), 0.5)
    write_image(tmp_path / "a.rimg", a)
    write_image(tmp_path / "b.rimg", a + 0.1)
    code, out, _ = run(["metrics", tmp_path / "a.rimg", tmp_path / "b.rimg"], capsys)
    assert code == 0 and out.startswith("psnr_db=20 ")

    write_image(tmp_path / "c.rimg", np.array([[1.0, -0.2], [0.5, 0.25]]))
    code, out, _ = run(["render", tmp_path / "c.rimg", tmp_path / "c.pgm"], capsys)
    assert code == 0
    assert (tmp_path / "c.pgm").read_bytes()[-4:] == bytes([255, 0, 128, 64])


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1
    assert run(["render", tmp_path / "missing.rimg"], capsys)[0] == 2
    (tmp_path / "bad.rimg").write_bytes(b"garbage")
    assert run(["metrics", tmp_path / "bad.rimg", tmp_path / "bad.rimg"], capsys)[0] == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "sgtv", "render", str(tmp_path / "none.rimg")],
                         capture_output=True, text=True)
    assert res.returncode == 2 and "data error" in res.stderr


def test_numerical_failure_exit_code(tmp_path, sim_config, capsys, monkeypatch):
    from sgtv import cli
    from sgtv.errors import NumericalError

    def boom(*args, **kwargs):
        raise NumericalError("diverged")

    run(["simulate", "--config", sim_config, "--out", tmp_path / "sim"], capsys)
    monkeypatch.setattr(cli, "reconstruct", boom)
    code, _, err = run(["reconstruct", "--config", recon_config(tmp_path)], capsys)
    assert code == 3 and "diverged" in err
