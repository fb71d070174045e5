import numpy as np
import pytest

from adaptseg.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from adaptseg.image_io import read_pgm, save_image
from adaptseg.report import read_csv_report
from adaptseg.synth import make_shape


def make_disk_files(tmp_path, size="48x48"):
    tmp_path.mkdir(parents=True, exist_ok=True)
    img = tmp_path / "disk.pgm"
    mask = tmp_path / "disk_mask.pgm"
    assert (
        main(
            [
                "synth",
                "--shape",
                "disk",
                "--size",
                size,
                "--fg",
                "0.8",
                "--bg",
                "0.2",
                "--out-image",
                str(img),
                "--out-mask",
                str(mask),
            ]
        )
        == EXIT_OK
    )
    return img, mask


def test_segment_happy_path(tmp_path, capsys):
    img, truth = make_disk_files(tmp_path)
    out_mask = tmp_path / "out_mask.pgm"
    out_u = tmp_path / "u.pgm"
    out_lam = tmp_path / "lam.pgm"
    trace = tmp_path / "trace.txt"
    code = main(
        [
            "segment",
            "--input",
            str(img),
            "--strategy",
            "ctd",
            "--lambda-min",
            "900",
            "--lambda-max",
            "40000",
            "--mu",
            "1000",
            "--out-mask",
            str(out_mask),
            "--out-u",
            str(out_u),
            "--out-lambda-map",
            str(out_lam),
            "--trace",
            str(trace),
            "--truth",
            str(truth),
        ]
    )
    assert code == EXIT_OK
    line = capsys.readouterr().out.strip()
    assert "strategy=ctd" in line and "dice=" in line and "it=" in line
    for path in (out_mask, out_u, out_lam, trace):
        assert path.exists() and path.stat().st_size > 0
    samples, _ = read_pgm(out_mask)
    assert set(np.unique(samples)) <= {0, 255}
    assert trace.read_text().splitlines()[0].split() == ["k", "diff", "gs_iters", "c1", "c2"]


def test_segment_usage_errors(tmp_path):
    # missing required flag
    assert main(["segment", "--strategy", "cen", "--mu", "10"]) == EXIT_USAGE
    img, _ = make_disk_files(tmp_path)
    # adaptive strategy without bounds
    code = main(
        [
            "segment",
            "--input",
            str(img),
            "--strategy",
            "ctd",
            "--mu",
            "10",
            "--out-mask",
            str(tmp_path / "m.pgm"),
        ]
    )
    assert code == EXIT_USAGE


def test_segment_io_error(tmp_path):
    code = main(
        [
            "segment",
            "--input",
            str(tmp_path / "missing.pgm"),
            "--strategy",
            "cen",
            "--lambda",
            "100",
            "--mu",
            "100",
            "--out-mask",
            str(tmp_path / "m.pgm"),
        ]
    )
    assert code == EXIT_IO


def test_segment_degenerate_image(tmp_path):
    flat = tmp_path / "flat.pgm"
    save_image(np.full((16, 16), 0.5), flat)
    code = main(
        [
            "segment",
            "--input",
            str(flat),
            "--strategy",
            "cen",
            "--lambda",
            "100",
            "--mu",
            "100",
            "--out-mask",
            str(tmp_path / "m.pgm"),
        ]
    )
    assert code == EXIT_NUMERIC


def test_synth_determinism_and_degenerate_warning(tmp_path):
    a_img, a_mask = make_disk_files(tmp_path / "a")
    b_img, b_mask = make_disk_files(tmp_path / "b")
    assert a_img.read_bytes() == b_img.read_bytes()
    assert a_mask.read_bytes() == b_mask.read_bytes()
    with pytest.warns(UserWarning):
        code = main(
            [
                "synth",
                "--shape",
                "disk",
                "--size",
                "8x8",
                "--fg",
                "0.5",
                "--bg",
                "0.5",
                "--out-image",
                str(tmp_path / "flat.pgm"),
                "--out-mask",
                str(tmp_path / "flat_mask.pgm"),
            ]
        )
    assert code == EXIT_OK


def test_synth_bad_geometry(tmp_path):
    code = main(
        [
            "synth",
            "--shape",
            "disk",
            "--size",
            "16by16",
            "--out-image",
            str(tmp_path / "x.pgm"),
            "--out-mask",
            str(tmp_path / "y.pgm"),
        ]
    )
    assert code == EXIT_USAGE


def test_noise_zero_sigma_is_byte_identical(tmp_path):
    img, _ = make_disk_files(tmp_path)
    out = tmp_path / "copy.pgm"
    assert (
        main(["noise", "--input", str(img), "--sigma", "0", "--seed", "3", "--output", str(out)])
        == EXIT_OK
    )
    assert out.read_bytes() == img.read_bytes()


def test_noise_seeds(tmp_path):
    img, _ = make_disk_files(tmp_path)
    out1 = tmp_path / "n1.pgm"
    out2 = tmp_path / "n2.pgm"
    for seed, out in ((1, out1), (2, out2)):
        assert (
            main(
                [
                    "noise",
                    "--input",
                    str(img),
                    "--sigma",
                    "15",
                    "--seed",
                    str(seed),
                    "--output",
                    str(out),
                ]
            )
            == EXIT_OK
        )
    s1, _ = read_pgm(out1)
    s2, _ = read_pgm(out2)
    assert s1.shape == s2.shape
    assert not np.array_equal(s1, s2)


def test_bench_fault_isolation(tmp_path):
    img, truth = make_disk_files(tmp_path)
    manifest = tmp_path / "runs.txt"
    manifest.write_text(
        f"image={img} strategy=cen lambda=1000 mu=1000 truth={truth}\n"
        f"image={tmp_path / 'gone.pgm'} strategy=cen lambda=1000 mu=1000\n"
        f"image={img} strategy=thr lambda_min=100 lambda_max=10000 mu=1000\n"
    )
    outdir = tmp_path / "bench"
    code = main(
        ["bench", "--manifest", str(manifest), "--out-dir", str(outdir), "--no-figures"]
    )
    assert code == EXIT_OK
    rows = read_csv_report(outdir / "report.csv")
    assert len(rows) == 3
    assert rows[0].error is None and rows[0].dice is not None and rows[0].dice > 0.9
    assert rows[1].error is not None
    assert rows[2].error is None
    assert (outdir / "run001_mask.pgm").exists()
    assert not (outdir / "run002_mask.pgm").exists()
    assert (outdir / "run003_mask.pgm").exists()
    assert (outdir / "report.txt").exists()


def test_bench_empty_manifest(tmp_path, capsys):
    manifest = tmp_path / "empty.txt"
    manifest.write_text("# nothing\n")
    outdir = tmp_path / "bench"
    code = main(["bench", "--manifest", str(manifest), "--out-dir", str(outdir), "--no-figures"])
    assert code == EXIT_OK
    assert "empty manifest" in capsys.readouterr().err
    assert read_csv_report(outdir / "report.csv") == []


def test_bench_all_rows_fail(tmp_path):
    manifest = tmp_path / "bad.txt"
    manifest.write_text("image=nope.pgm strategy=cen lambda=1 mu=1\n")
    code = main(
        ["bench", "--manifest", str(manifest), "--out-dir", str(tmp_path / "b"), "--no-figures"]
    )
    assert code != EXIT_OK


def test_bench_renders_figures(tmp_path):
    img, _ = make_disk_files(tmp_path, size="32x32")
    manifest = tmp_path / "one.txt"
    manifest.write_text(f"image={img} strategy=mm lambda_min=100 lambda_max=1000 mu=100 id=demo\n")
    outdir = tmp_path / "bench"
    assert main(["bench", "--manifest", str(manifest), "--out-dir", str(outdir)]) == EXIT_OK
    fig = outdir / "demo.png"
    assert fig.exists() and fig.stat().st_size > 0
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_bench_noisy_grid_structure(tmp_path):
    """A 4-strategy x {clean, sigma15, sigma25} grid produces 12 report rows."""
    img, truth = make_disk_files(tmp_path)
    img15 = tmp_path / "disk15.pgm"
    img25 = tmp_path / "disk25.pgm"
    main(["noise", "--input", str(img), "--sigma", "15", "--seed", "1", "--output", str(img15)])
    main(["noise", "--input", str(img), "--sigma", "25", "--seed", "1", "--output", str(img25)])
    rows = []
    grid = {
        str(img): {"cen": "800", "ctd": ("500", "1000"), "mm": ("500", "1000"), "thr": ("500", "1000")},
        str(img15): {"cen": "300", "ctd": ("300", "1000"), "mm": ("300", "1000"), "thr": ("300", "1000")},
        str(img25): {"cen": "170", "ctd": ("170", "800"), "mm": ("170", "500"), "thr": ("170", "800")},
    }
    for image, per_strategy in grid.items():
        for strategy, lam in per_strategy.items():
            if strategy == "cen":
                rows.append(f"image={image} strategy=cen lambda={lam} mu=100 truth={truth}")
            else:
                lo, hi = lam
                rows.append(
                    f"image={image} strategy={strategy} lambda_min={lo} lambda_max={hi}"
                    f" mu=100 truth={truth}"
                )
    manifest = tmp_path / "grid.txt"
    manifest.write_text("\n".join(rows) + "\n")
    outdir = tmp_path / "grid_out"
    assert main(["bench", "--manifest", str(manifest), "--out-dir", str(outdir), "--no-figures"]) == EXIT_OK
    reports = read_csv_report(outdir / "report.csv")
    assert len(reports) == 12
    assert all(r.error is None for r in reports)
    assert all(r.it is not None and r.it >= 1 for r in reports)
    assert all(r.dice is not None and 0.0 <= r.dice <= 1.0 for r in reports)


def test_segment_figure_output(tmp_path):
    img, _ = make_disk_files(tmp_path, size="32x32")
    fig = tmp_path / "run.png"
    code = main(
        [
            "segment",
            "--input",
            str(img),
            "--strategy",
            "thr",
            "--lambda-min",
            "100",
            "--lambda-max",
            "1000",
            "--mu",
            "100",
            "--out-mask",
            str(tmp_path / "m.pgm"),
            "--figure",
            str(fig),
        ]
    )
    assert code == EXIT_OK
    assert fig.exists() and fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_help_exits_zero():
    assert main(["--help"]) == EXIT_OK
    assert main(["segment", "--help"]) == EXIT_OK
