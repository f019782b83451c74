import os
import subprocess

import numpy as np
import pytest

import crossdiff as cd


def test_version_and_presets():
    assert cd.__version__
    p = cd.preset("treated")
    assert p.s1 == pytest.approx(0.0035)
    assert p.replace(p2=0.55).p2 == 0.55
    assert set(p.to_dict()) >= {"c", "d32", "tau_L"}
    with pytest.raises(ValueError):
        p.replace(nope=1.0)
    with pytest.raises(ValueError):
        cd.preset("nope")


def test_coexistence_point():
    p = cd.preset("untreated")
    e = cd.coexistence(p)
    assert np.allclose(tuple(e.state), (0.592878, 0.372148, 0.295647), atol=1e-4)
    assert e.stability == "stable"
    assert max(abs(x) for x in cd.reaction_rhs(p, e.state)) < 1e-10
    j = cd.jacobian(p, e.state)
    assert j.shape == (3, 3)
    assert j[1, 2] == 0.0


def test_hopf_point():
    h = cd.hopf_scan(cd.preset("untreated"), 0.3, 0.58)
    assert abs(h.p2_critical - 0.520) <= 0.005
    assert cd.hopf_scan(cd.preset("untreated"), 0.1, 0.2) is None


def test_dispersion():
    p = cd.preset("untreated").replace(d32=0.01)
    d = cd.dispersion_relation(p, cd.coexistence(p).state)
    assert d["growth"].shape == d["k"].shape
    assert d["growth_max"] > 0.0


def test_region():
    grid = cd.existence_region(cd.preset("untreated"), np.array([0.5]), np.array([0.25]))
    assert grid.shape == (1, 1) and bool(grid[0, 0])


def test_short_simulation():
    snaps = cd.simulate({"dims": 1, "dx": 0.02, "t_end": 2, "snapshot_every": 0.5})
    assert len(snaps) == 5
    assert snaps[-1].v.shape == (1, 51)
    assert snaps[-1].time == pytest.approx(2.0)
    assert cd.stationarity(snaps[-2], snaps[-1]) > 0.0
    report = cd.pattern_report(snaps)
    assert "pattern_class=" in report
    with pytest.raises(ValueError):
        cd.simulate({"dt": 0.5})


def test_pattern_class():
    y, x = np.mgrid[0:101, 0:101]
    bands = ((x % 15) < 5).astype(float)
    assert cd.pattern_class(bands) == "stripes"
    assert cd.pattern_class(np.full((20, 20), 3.0)) == "homogeneous"


cli = os.environ.get("CROSSDIFF_CLI")


@pytest.mark.skipif(not cli, reason="CROSSDIFF_CLI not set")
def test_cli_outputs(tmp_path):
    from PIL import Image

    out = tmp_path / "run"
    r = subprocess.run(
        [cli, "simulate", "--dx", "0.05", "--t-end", "0.5", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0, r.stderr
    img = Image.open(out / "snap_0000_v.png")
    assert img.size == (21, 21)
    assert img.mode == "RGB"
    raw = np.fromfile(out / "snap_0000.bin", dtype="<f8", offset=40)
    assert raw.size == 3 * 21 * 21
    csv = np.loadtxt(out / "snap_0000_v.csv", delimiter=",", skiprows=1)
    assert np.allclose(csv[:, 2], raw[441:882])
    bad = subprocess.run([cli, "equilibria", "--bogus", "--out", str(tmp_path / "x")], capture_output=True)
    assert bad.returncode == 2
    assert not (tmp_path / "x").exists()
