import hashlib

import numpy as np
import pytest

from incremental_pl import cli, pipeline
from incremental_pl.config import ConfigError, build_config, format_config, load_config, parse_kv

SMALL = """\
n_s = 300
n_t = 300
epochs_source = 8
epochs_crude = 6
epochs_student = 6
epochs_warm = 3
epochs_round = 3
epochs_finetune = 3
max_rounds = 5
"""


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture
def small_cfg(tmp_path):
    p = tmp_path / "small.cfg"
    p.write_text(SMALL)
    return p


@pytest.fixture
def prepared(tmp_path, small_cfg):
    """gen + source into one directory."""
    out = tmp_path / "run"
    assert cli.main(["gen", "--config", str(small_cfg), "--out", str(out)]) == 0
    assert cli.main(["source", "--config", str(small_cfg), "--out", str(out)]) == 0
    return out


# -- config --------------------------------------------------------------------

def test_parse_kv_comments_and_blanks():
    assert parse_kv("# head\n\na = 1  # trailing\nb=x,y\n") == {"a": "1", "b": "x,y"}
    with pytest.raises(ConfigError):
        parse_kv("just words")


def test_profile_then_overrides():
    cfg = build_config({"profile": "visda", "beta": "0.5"})
    assert (cfg.hp.alpha, cfg.hp.beta, cfg.hp.lambda_stop) == (0.7, 0.5, 0.25)
    cfg = build_config({"profile": "visda"}, profile="office-home")
    assert cfg.profile == "office-home" and cfg.hp.alpha == 0.6


def test_lambda_alias_and_seed_override():
    cfg = build_config({"lambda": "0.4", "seeds": "3,4"})
    assert cfg.hp.lambda_stop == 0.4 and cfg.seeds == [3, 4] and cfg.hp.seed == 3
    cfg = build_config({"seeds": "3,4"}, seed=9)
    assert cfg.seeds == [9] and cfg.hp.seed == 9


@pytest.mark.parametrize("values", [{"nope": "1"}, {"alpha": "2"}, {"K": "1"},
                                    {"epochs_round": "x"}, {"profile": "imagenet"}])
def test_bad_config_raises(values):
    with pytest.raises(ConfigError):
        build_config(values)


def test_format_config_round_trips(tmp_path):
    cfg = build_config({"profile": "office-home", "hidden": "32,16", "priors": "1,2,3,4,5",
                        "angle": "0.7", "seeds": "1,2"})
    p = tmp_path / "c.cfg"
    p.write_text(format_config(cfg))
    back = load_config(p)
    assert back.hp == cfg.hp and back.data == cfg.data and back.seeds == cfg.seeds


def test_missing_config_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


# -- gen ---------------------------------------------------------------------

def test_gen_is_deterministic(tmp_path, small_cfg):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["gen", "--config", str(small_cfg), "--out", str(d), "--seed", "5"]) == 0
    assert _sha(a / "source.txt") == _sha(b / "source.txt")
    assert _sha(a / "target.txt") == _sha(b / "target.txt")
    c = tmp_path / "c"
    cli.main(["gen", "--config", str(small_cfg), "--out", str(c), "--seed", "6"])
    assert _sha(a / "source.txt") != _sha(c / "source.txt")


def test_gen_rejects_single_class(tmp_path):
    cfg = tmp_path / "k1.cfg"
    cfg.write_text("K = 1\n")
    assert cli.main(["gen", "--config", str(cfg), "--out", str(tmp_path / "x")]) == cli.EXIT_CONFIG


# -- source ------------------------------------------------------------------

def test_source_outputs(prepared):
    assert pipeline.checkpoint_role(prepared / cli.SOURCE_CHECKPOINT) == "source"
    preds = pipeline.load_predictions(prepared / cli.PREDICTIONS)
    assert len(preds) == 300 and preds.K == 5
    assert np.all(np.abs(preds.probs.sum(axis=1) - 1) <= 1e-6)
    report = dict(ln.split("=") for ln in (prepared / "source_report.txt").read_text().split())
    assert float(report["heldout_acc"]) > 0.8
    assert 0.2 < float(report["target_acc"]) < 1.0


def test_source_missing_data_is_config_error(tmp_path):
    assert cli.main(["source", "--out", str(tmp_path / "empty")]) == cli.EXIT_CONFIG


# -- adapt -------------------------------------------------------------------

def test_adapt_writes_one_record_per_round(prepared, small_cfg):
    (prepared / cli.SOURCE_CHECKPOINT).unlink()
    assert cli.main(["adapt", "--config", str(small_cfg), "--out", str(prepared)]) == 0
    summary = dict(ln.split("=") for ln in (prepared / "summary.txt").read_text().split())
    rows = pipeline.read_metrics(prepared / cli.METRICS)
    assert len(rows) == int(summary["rounds"])
    assert [r["round"] for r in rows] == list(range(1, len(rows) + 1))
    assert pipeline.checkpoint_role(prepared / cli.TARGET_CHECKPOINT) == "target"
    resolved = load_config(prepared / "config.resolved")
    assert resolved.hp.epochs_round == 3


def test_adapt_refuses_source_checkpoint_as_predictions(prepared, small_cfg):
    code = cli.main(["adapt", "--config", str(small_cfg), "--out", str(prepared),
                     "--predictions", str(prepared / cli.SOURCE_CHECKPOINT)])
    assert code == cli.EXIT_CONFIG


def test_adapt_rejects_corrupt_predictions(prepared, small_cfg):
    bad = prepared / "bad.txt"
    bad.write_text("K=5 n=2\n0,0.5,0.5,0,0,0\n")
    code = cli.main(["adapt", "--config", str(small_cfg), "--out", str(prepared),
                     "--predictions", str(bad)])
    assert code == cli.EXIT_CONFIG


def test_adapt_empty_warmup_exit_code(prepared, small_cfg, tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text(SMALL + "profile = custom\nalpha = 1.0\nbeta = 1e13\n")
    assert cli.main(["adapt", "--config", str(cfg), "--out", str(prepared)]) == cli.EXIT_STALL


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_adapt_divergence_exit_code(prepared, small_cfg, tmp_path):
    cfg = tmp_path / "hot.cfg"
    cfg.write_text(SMALL + "lr = 1e300\n")
    assert cli.main(["adapt", "--config", str(cfg), "--out", str(prepared)]) == cli.EXIT_DIVERGED


# -- sweep / ablate ----------------------------------------------------------------

def test_sweep_alpha_grid(prepared, small_cfg):
    grid = ",".join(f"{v / 10:.1f}" for v in range(11))
    assert cli.main(["sweep", "--config", str(small_cfg), "--out", str(prepared),
                     "--param", "alpha", "--values", grid]) == 0
    lines = (prepared / "sweep_alpha.txt").read_text().splitlines()
    assert lines[0].split(",") == list(cli.SWEEP_FIELDS)
    assert len(lines) == 12


def test_sweep_lambda_one_has_no_incremental_rounds(prepared, small_cfg):
    assert cli.main(["sweep", "--config", str(small_cfg), "--out", str(prepared),
                     "--param", "lambda", "--values", "1.0"]) == 0
    row = (prepared / "sweep_lambda.txt").read_text().splitlines()[1].split(",")
    assert int(row[cli.SWEEP_FIELDS.index("incremental_rounds")]) == 0


def test_sweep_needs_param(prepared, small_cfg):
    assert cli.main(["sweep", "--config", str(small_cfg), "--out", str(prepared)]) == cli.EXIT_CONFIG


def test_ablate_has_four_rows(prepared, small_cfg):
    assert cli.main(["ablate", "--config", str(small_cfg), "--out", str(prepared)]) == 0
    lines = (prepared / "ablation.txt").read_text().splitlines()
    assert [ln.split(",")[0] for ln in lines[1:]] == list(pipeline.ABLATIONS)
