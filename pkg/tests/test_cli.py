from __future__ import annotations

import json

import numpy as np
import pytest

from ldmcap.cli import main


def _files(path):
    return sorted(p.name for p in path.iterdir())


def _run_ldm(out, extra=()):
    return main(
        [
            "ldm", "--spec", "knn:k=1", "--k", "6", "--holdout", "3",
            "--repeats", "2", "--out", str(out), *extra,
        ]
    )


# ---------------------------------------------------------------------------
# ldm command
# ---------------------------------------------------------------------------


def test_ldm_writes_csv_pgm_and_json_per_spec(tmp_path, capsys):
    out = tmp_path / "out"
    assert _run_ldm(out) == 0
    assert _files(out) == ["knn_k1.csv", "knn_k1.json", "knn_k1.pgm", "knn_k1.pgm.json"]

    payload = json.loads((out / "knn_k1.json").read_text())
    assert payload["spec"] == "knn:k=1"
    assert payload["seed"] == 0
    assert payload["k_columns"] == 6
    assert payload["holdout_size"] == 3
    assert payload["repeats"] == 2
    assert len(payload["alpha"]) == 27
    assert len(payload["entropies"]) == 2
    assert payload["entropy_mean"] == pytest.approx(np.mean(payload["entropies"]))
    assert isinstance(payload["converged"], bool)
    assert payload["iterations"] >= 1

    table = capsys.readouterr().out
    assert "knn:k=1" in table
    assert "entropy" in table


def test_ldm_csv_matches_matrix_shape(tmp_path):
    out = tmp_path / "out"
    assert _run_ldm(out) == 0
    lines = (out / "knn_k1.csv").read_text().splitlines()
    assert lines[0] == ",".join(f"col_{i}" for i in range(6))
    assert len(lines) == 1 + 27


def test_ldm_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run_ldm(a) == 0
    assert _run_ldm(b) == 0
    assert _files(a) == _files(b)
    for name in _files(a):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_ldm_seed_changes_artifacts(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run_ldm(a) == 0
    assert _run_ldm(b, extra=("--seed", "1")) == 0
    assert (a / "knn_k1.csv").read_bytes() != (b / "knn_k1.csv").read_bytes()


def test_ldm_log_scale_changes_the_image_only(tmp_path):
    # needs graded probabilities: a one-hot knn matrix renders identically on
    # both axes, but naive-bayes columns carry midtones that the scales map
    # differently
    a, b = tmp_path / "a", tmp_path / "b"
    args = [
        "ldm", "--spec", "gaussian_nb", "--k", "6", "--holdout", "3",
        "--repeats", "1",
    ]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b), "--scale", "log"]) == 0
    assert (a / "gaussian_nb.pgm").read_bytes() != (b / "gaussian_nb.pgm").read_bytes()
    assert (a / "gaussian_nb.csv").read_bytes() == (b / "gaussian_nb.csv").read_bytes()
    assert json.loads((b / "gaussian_nb.pgm.json").read_text())["scale"] == "log"


def test_ldm_multiple_specs_write_separate_stems(tmp_path):
    out = tmp_path / "out"
    rc = main(
        [
            "ldm", "--spec", "knn:k=1", "--spec", "gaussian_nb",
            "--k", "4", "--holdout", "3", "--repeats", "1", "--out", str(out),
        ]
    )
    assert rc == 0
    names = _files(out)
    assert "knn_k1.json" in names
    assert "gaussian_nb.json" in names


# ---------------------------------------------------------------------------
# record command
# ---------------------------------------------------------------------------


def test_record_writes_summary_and_trial_log(tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["record", "--spec", "gaussian_nb", "--trials", "12", "--out", str(out)])
    assert rc == 0
    assert _files(out) == ["gaussian_nb.csv", "gaussian_nb.json"]

    payload = json.loads((out / "gaussian_nb.json").read_text())
    assert payload["spec"] == "gaussian_nb"
    assert payload["trials"] == 12
    assert payload["dataset_size"] == 150
    assert payload["num_classes"] == 3
    assert payload["chance_baseline"] == 50.0
    assert 0.0 <= payload["ci_low"] <= payload["mean_recovered"] <= payload["ci_high"] <= 150.0

    lines = (out / "gaussian_nb.csv").read_text().splitlines()
    assert lines[0] == "trial,count"
    assert len(lines) == 1 + 12
    counts = [int(line.split(",")[1]) for line in lines[1:]]
    assert np.mean(counts) == pytest.approx(payload["mean_recovered"])

    assert "gaussian_nb" in capsys.readouterr().out


def test_record_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["record", "--spec", "knn:k=3", "--trials", "10"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    for name in _files(a):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


# ---------------------------------------------------------------------------
# compare command
# ---------------------------------------------------------------------------


def test_compare_sorts_rows_by_recorder_mean_descending(tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(
        [
            "compare", "--spec", "knn:k=10", "--spec", "knn:k=1",
            "--k", "4", "--holdout", "3", "--repeats", "1",
            "--trials", "15", "--out", str(out),
        ]
    )
    assert rc == 0
    lines = (out / "compare.csv").read_text().splitlines()
    assert lines[0] == "spec,ldm_entropy_mean,recorder_mean,ci_low,ci_high"
    assert len(lines) == 3
    first = lines[1].split(",")
    second = lines[2].split(",")
    assert first[0] == "knn:k=1"  # near-perfect recorder, sorts first
    assert second[0] == "knn:k=10"
    assert float(first[2]) > float(second[2])

    table = capsys.readouterr().out
    assert table.index("knn:k=1") < table.index("knn:k=10")


def test_compare_also_writes_per_spec_artifacts(tmp_path):
    out = tmp_path / "out"
    rc = main(
        [
            "compare", "--spec", "knn:k=1", "--spec", "gaussian_nb",
            "--k", "4", "--holdout", "3", "--repeats", "1",
            "--trials", "5", "--out", str(out),
        ]
    )
    assert rc == 0
    assert "compare.csv" in _files(out)


def test_compare_requires_two_specs(tmp_path, capsys):
    rc = main(["compare", "--spec", "knn:k=1", "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "at least 2" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# errors and exit codes
# ---------------------------------------------------------------------------


def test_missing_spec_is_a_usage_error(tmp_path, capsys):
    rc = main(["ldm", "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "--spec" in capsys.readouterr().err


def test_unknown_family_exits_1(tmp_path, capsys):
    rc = main(["record", "--spec", "perceptron", "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "perceptron" in capsys.readouterr().err


def test_oversized_labeling_space_exits_2(tmp_path, capsys):
    rc = main(
        [
            "ldm", "--spec", "knn:k=1", "--holdout", "20",
            "--k", "2", "--repeats", "1", "--out", str(tmp_path / "o"),
        ]
    )
    assert rc == 2
    err = capsys.readouterr().err
    assert "3**20" in err or "holdout" in err


def test_missing_csv_file_exits_1(tmp_path, capsys):
    rc = main(
        [
            "record", "--spec", "knn:k=1", "--trials", "2",
            "--dataset", f"csv:{tmp_path / 'missing.csv'}:-1",
            "--out", str(tmp_path / "o"),
        ]
    )
    assert rc == 1


def test_malformed_dataset_argument_exits_1(tmp_path, capsys):
    for dataset in ("parquet:data", "csv:only_a_path", "csv:file.csv:last"):
        rc = main(
            [
                "record", "--spec", "knn:k=1", "--dataset", dataset,
                "--out", str(tmp_path / "o"),
            ]
        )
        assert rc == 1, dataset


def test_no_subcommand_exits_1(capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1


def test_bad_scale_choice_exits_1(tmp_path):
    rc = main(
        ["ldm", "--spec", "knn:k=1", "--scale", "cube", "--out", str(tmp_path / "o")]
    )
    assert rc == 1


def test_custom_csv_dataset_via_cli(tmp_path):
    csv = tmp_path / "toy.csv"
    rows = ["f0,f1,label"]
    rng = np.random.default_rng(0)
    for i in range(12):
        rows.append(f"{rng.random():.3f},{rng.random():.3f},{'ab'[i % 2]}")
    csv.write_text("\n".join(rows) + "\n")

    out = tmp_path / "out"
    rc = main(
        [
            "record", "--spec", "knn:k=1", "--trials", "4",
            "--dataset", f"csv:{csv}:-1", "--out", str(out),
        ]
    )
    assert rc == 0
    payload = json.loads((out / "knn_k1.json").read_text())
    assert payload["dataset_size"] == 12
    assert payload["num_classes"] == 2
    assert payload["chance_baseline"] == 6.0
