import json

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from _graphs import faction_graph
from signmotif.classifier import TrainConfig, register_classifier
from signmotif.evaluation import (
    MethodSpec, MetricsReport, RunOptions, SplitSpec, accuracy, auc, expand_methods, make_realization,
    mean_std, method_table_csv, run_experiment, sampled_auc, split_sizes,
)
from signmotif.evaluation.experiment import evaluate_realization
from signmotif.graph import SignedGraph, mask
from signmotif.motifs import MotifIndex, get_predictor
from signmotif.scoring import DegeneratePrior

FAST = TrainConfig(rounds=20)


@pytest.fixture(scope="module")
def fg():
    return faction_graph()


def _count_graph(n_pos: int, n_neg: int) -> SignedGraph:
    signs = [1] * n_pos + [-1] * n_neg
    return SignedGraph.from_links([("h", str(i), s) for i, s in enumerate(signs)])


# ---- splits

def test_split_sizes_from_table_fractions():
    assert split_sizes(1186, 0.9) == (1067, 119)
    g = _count_graph(14124 - 1186, 1186)
    r = make_realization(g, SplitSpec(), 0)
    assert (len(r.train_neg), len(r.test_neg), len(r.train_pos), len(r.test_pos)) == (1067, 119, 1067, 119)


def test_split_rejects_full_training_fraction():
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=1.0)
    with pytest.raises(ValueError):
        make_realization(_count_graph(5, 1), SplitSpec(), 0)


def test_split_needs_enough_positives():
    with pytest.raises(ValueError, match="positive"):
        make_realization(_count_graph(5, 20), SplitSpec(), 0)


def test_split_determinism_and_soundness(fg):
    spec = SplitSpec(master_seed=42)
    a, b = make_realization(fg, spec, 3), make_realization(fg, spec, 3)
    for name in ("train_pos", "train_neg", "test_pos", "test_neg"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    c = make_realization(fg, spec, 4)
    assert not np.array_equal(a.test_neg, c.test_neg)
    sets = [set(a.train_pos), set(a.train_neg), set(a.test_pos), set(a.test_neg)]
    for i in range(4):
        for j in range(i + 1, 4):
            assert not sets[i] & sets[j]
    assert len(sets[0]) == len(sets[1]) and len(sets[2]) == len(sets[3])
    assert set(a.hidden) == sets[2] | sets[3]
    assert np.all(fg.signs[a.train_pos] > 0) and np.all(fg.signs[a.test_neg] < 0)
    view = mask(fg, a.hidden)
    assert np.all(view.signs[a.hidden] == 0)
    assert np.count_nonzero(view.signs == 0) == len(a.hidden)


def test_test_signs_do_not_reach_features(fg):
    r = make_realization(fg, SplitSpec(master_seed=1), 0)
    flipped = fg.signs.copy()
    flipped[r.hidden] *= -1
    g2 = SignedGraph(list(fg.labels), fg.src, fg.dst, flipped)
    ids, _ = r.test_set()
    e1 = MotifIndex(mask(fg, r.hidden)).link_evidence(ids)
    e2 = MotifIndex(mask(g2, r.hidden)).link_evidence(ids)
    for name in ("n_entities", "log_plain", "log_cl", "log_cn"):
        assert np.array_equal(getattr(e1, name), getattr(e2, name))


# ---- metrics

def test_auc_examples():
    assert auc([1, 1], [0, 0]) == 1.0
    assert auc([0.3, 0.3], [0.3, 0.3, 0.3]) == 0.5
    assert auc([0.8, 0.3], [0.5]) == 0.5
    with pytest.raises(ValueError):
        auc([], [1.0])


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30, unique=True),
       st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30, unique=True))
def test_auc_complement(pos, neg):
    assume(not set(pos) & set(neg))
    assert auc(pos, neg) + auc(neg, pos) == pytest.approx(1.0, abs=1e-12)


def test_sampled_auc_agrees():
    rng = np.random.default_rng(0)
    pos = rng.normal(0.5, 1.0, 300)
    neg = rng.normal(0.0, 1.0, 250)
    est = sampled_auc(pos, neg, 100_000, np.random.default_rng(1))
    assert abs(est - auc(pos, neg)) <= 0.01


def test_accuracy():
    y = np.array([1, -1, 1, -1])
    assert accuracy(y, y) == 1.0
    assert accuracy(-y, y) == 0.0
    assert accuracy([1, -1, 1, 1], y) == 0.75
    with pytest.raises(ValueError):
        accuracy([1], [1, 1])
    with pytest.raises(ValueError):
        accuracy([], [])


def test_mean_std_population():
    assert mean_std([0.5]) == (0.5, 0.0)
    assert mean_std([1.0, 3.0]) == (2.0, 1.0)


# ---- methods

def test_method_parsing():
    assert MethodSpec.parse("FGMNB").key == "FGMNB"
    assert MethodSpec.parse("gsmnb-cl:S4").key == "GSMNB-CL:T+-"
    with pytest.raises(ValueError):
        MethodSpec.parse("bogus")
    with pytest.raises(ValueError):
        MethodSpec.parse("SMNB")
    specs = expand_methods(["SMNB", "GSMNB-CL", "FGMNB"], "all")
    assert len(specs) == 19
    assert [s.key for s in expand_methods(["SMNB"], ["T+-", "S4"])] == ["SMNB:T+-"]


# ---- experiments

def test_single_realization_has_zero_std(fg):
    rep = run_experiment(fg, ["GMMNB", "GSMNB-CL:T+-"], SplitSpec(realizations=1, master_seed=5), FAST)
    for r in rep.results:
        s = r.summary()
        assert s["std_auc"] == 0.0 and s["std_acc"] == 0.0
        assert 0.0 <= s["mean_auc"] <= 1.0


def test_report_is_deterministic_across_threads(fg):
    spec = SplitSpec(realizations=3, master_seed=9)
    methods = expand_methods(["SMNB", "FGMNB"], ["T++"])
    a = run_experiment(fg, methods, spec, FAST, threads=1).to_json()
    b = run_experiment(fg, methods, spec, FAST, threads=3).to_json()
    assert a == b
    assert MetricsReport.from_json(a).to_json() == a


def test_signal_is_found(fg):
    rep = run_experiment(fg, ["FGMNB"], SplitSpec(realizations=2, master_seed=0), FAST)
    assert rep.get("FGMNB").summary()["mean_auc"] > 0.7


def test_constant_classifier_scores_half(fg):
    register_classifier("half", lambda cfg: _Half())
    rep = run_experiment(fg, ["GMMNB"], SplitSpec(realizations=4), FAST, RunOptions(classifier="half"))
    assert rep.get("GMMNB").accuracy == [0.5] * 4
    assert rep.get("GMMNB").auc == [0.5] * 4


class _Half:
    def fit(self, X, y):
        return self

    def predict_proba(self, X):
        # p >= 0.5 labels everything positive
        return np.full(len(X), 0.5)


def test_shuffled_labels_lose_signal(fg):
    rep = run_experiment(fg, ["FGMNB"], SplitSpec(realizations=12, master_seed=3), FAST,
                         RunOptions(shuffle_train_labels=True))
    assert abs(rep.get("FGMNB").summary()["mean_auc"] - 0.5) < 0.1


def test_degenerate_prior_aborts():
    from signmotif.evaluation import Realization
    g = SignedGraph.from_links([("a", "b", -1), ("b", "c", 1), ("c", "d", 1), ("a", "d", 1)])
    neg = np.flatnonzero(g.signs < 0)
    pos = np.flatnonzero(g.signs > 0)
    # a realization that hides every negative sign leaves no prior
    r = Realization(0, (0, 0), pos[:1], pos[1:2], pos[2:], neg)
    with pytest.raises(DegeneratePrior, match="realization 0"):
        evaluate_realization(g, r, [MethodSpec("GMMNB")], FAST)


def test_tables(fg):
    spec = SplitSpec(realizations=2, master_seed=1)
    rep = run_experiment(fg, expand_methods(["SMNB", "GSMNB-CL", "GMMNB"], ["T++", "Q+++"]), spec, FAST,
                         dataset="toy")
    table = rep.predictor_table_csv("auc").splitlines()
    assert table[0] == "predictor,s_index,SMNB_mean,SMNB_std,GSMNB-CL_mean,GSMNB-CL_std"
    assert [row.split(",")[0] for row in table[1:]] == ["T++", "Q+++"]
    multi = method_table_csv({"toy": rep, "toy2": rep}, "acc").splitlines()
    assert multi[0] == "method,toy_mean,toy_std,toy2_mean,toy2_std"
    assert len(multi) == 1 + 5
    meta = json.loads(rep.to_json())["metadata"]
    assert meta["split"]["master_seed"] == 1 and meta["graph"]["link_count"] == fg.n_links
