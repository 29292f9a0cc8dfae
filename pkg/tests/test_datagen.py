import numpy as np
import pytest

from incremental_pl import datagen
from incremental_pl.datagen import ShiftSpec, make_domain_pair
from incremental_pl.pipeline import evaluate, profile, train_source


def _transfer(shift, seed):
    pair = make_domain_pair(shift=shift, seed=seed)
    train, held = datagen.split(pair.source, 0.8, seed)
    model = train_source(train, pair.K, profile("office", seed=seed))
    held_acc = evaluate(model, held.features, held.labels).accuracy
    tgt_acc = evaluate(model, pair.target.features, pair.target.evaluation_labels()).accuracy
    return held_acc, tgt_acc


def test_zero_shift_matches_source_test_accuracy():
    held, tgt = _transfer(ShiftSpec.none(), seed=0)
    assert abs(held - tgt) <= 0.03


def test_large_shift_degrades_transfer():
    _, base = _transfer(ShiftSpec.none(), seed=0)
    _, shifted = _transfer(ShiftSpec(angle=np.pi / 2, translation=2.0, noise=2.0), seed=0)
    assert base - shifted >= 0.15


def test_noise_trend_over_seeds():
    means = []
    for noise in (0.0, 1.0, 2.0):
        accs = [_transfer(ShiftSpec(np.pi / 4, 1.0, noise), seed)[1] for seed in range(5)]
        means.append(np.mean(accs))
    assert means[0] > means[1] > means[2]


def test_same_seed_same_bytes(tmp_path):
    for d in ("a", "b"):
        datagen.save_domain_pair(make_domain_pair(n_s=200, n_t=150, seed=3), tmp_path / d)
    for f in ("source.txt", "target.txt"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_different_seeds_differ():
    a = make_domain_pair(n_s=50, n_t=50, seed=1)
    b = make_domain_pair(n_s=50, n_t=50, seed=2)
    assert not np.array_equal(a.source.features, b.source.features)


def test_round_trip(tmp_path):
    pair = make_domain_pair(n_s=120, n_t=80, seed=5)
    src_path, tgt_path = datagen.save_domain_pair(pair, tmp_path)
    src, K = datagen.load_source(src_path)
    tgt, _ = datagen.load_target(tgt_path)
    assert K == pair.K
    assert np.array_equal(src.features, pair.source.features)
    assert np.array_equal(src.labels, pair.source.labels)
    assert np.array_equal(tgt.features, pair.target.features)
    assert np.array_equal(tgt.evaluation_labels(), pair.target.evaluation_labels())


def test_unlabeled_target_dump(tmp_path):
    pair = make_domain_pair(n_s=20, n_t=20, seed=0)
    datagen.save_labeled(tmp_path / "t.txt", pair.target.features, None, pair.K)
    tgt, _ = datagen.load_target(tmp_path / "t.txt")
    assert not tgt.has_labels
    with pytest.raises(LookupError):
        tgt.evaluation_labels()


def test_target_labels_are_not_a_plain_attribute():
    t = make_domain_pair(n_s=10, n_t=10).target
    assert not hasattr(t, "labels")
    assert "label" not in repr(t)


@pytest.mark.parametrize("kw", [dict(K=1), dict(dim=1), dict(separation=0.0)])
def test_rejects_degenerate_specs(kw):
    with pytest.raises(ValueError):
        make_domain_pair(**kw)


def test_class_priors_shape_counts():
    pair = make_domain_pair(K=3, n_s=1000, n_t=600, class_priors=[0.6, 0.3, 0.1],
                            target_priors=[1, 1, 1])
    assert np.bincount(pair.source.labels).tolist() == [600, 300, 100]
    assert np.bincount(pair.target.evaluation_labels()).tolist() == [200, 200, 200]


def test_zero_rotation_is_identity():
    rot = datagen._plane_rotation(6, 0.0, np.random.default_rng(0))
    assert np.allclose(rot, np.eye(6))
    rot = datagen._plane_rotation(6, 1.1, np.random.default_rng(0))
    assert np.allclose(rot @ rot.T, np.eye(6))


def test_batches_cover_dataset_once():
    batches = datagen.iterate_batches(130, 64, seed=1, epoch=0)
    assert [len(b) for b in batches] == [64, 64, 2]
    assert sorted(np.concatenate(batches).tolist()) == list(range(130))


def test_epochs_reorder_but_keep_multiset():
    a = np.concatenate(datagen.iterate_batches(100, 32, seed=1, epoch=0))
    b = np.concatenate(datagen.iterate_batches(100, 32, seed=1, epoch=1))
    assert not np.array_equal(a, b)
    assert sorted(a) == sorted(b)


def test_batches_replay():
    a = datagen.iterate_batches(100, 32, seed=4, epoch=3)
    b = datagen.iterate_batches(100, 32, seed=4, epoch=3)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
