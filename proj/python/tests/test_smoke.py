import math

import numpy as np
import pytest

import cengcn


def star(leaves=4):
    return cengcn.Graph(leaves + 1, [(0, i, 1.0) for i in range(1, leaves + 1)])


def test_graph_basics():
    g = star()
    assert g.num_vertices == 5
    assert g.num_edges == 4
    np.testing.assert_array_equal(g.degree, [4, 1, 1, 1, 1])
    assert g.neighbors(0) == [1, 2, 3, 4]
    assert g.component_count() == 1
    a = g.adjacency()
    assert a.shape == (5, 5)
    assert (a == a.T).all()


def test_centrality_on_star():
    g = star()
    np.testing.assert_array_equal(cengcn.degree_centrality(g), [4, 1, 1, 1, 1])
    np.testing.assert_allclose(cengcn.eigenvector_centrality(g), [2, 1, 1, 1, 1], atol=1e-9)
    assert cengcn.hub_count(5, 0.1) == 1
    assert cengcn.select_hubs(cengcn.degree_centrality(g), 20.0) == [0]


def test_propagation_and_signs_on_star():
    g = star()
    scores = cengcn.propagate(g, [0], 5)
    np.testing.assert_array_equal(scores[:, 0], [0, 1, 1, 1, 1])
    assert cengcn.similarity_sign(g, [0], 5) == [1, 1, 1, 1]
    p = cengcn.transition_matrix(g)
    np.testing.assert_allclose(p.sum(axis=1), 1.0)


def test_star_transform():
    out = cengcn.transform(star(), {"transform.r": 0.2})
    np.testing.assert_array_equal(out["diagonal"], [4, 1, 1, 1, 1])
    assert [w for _, _, w in out["edges"]] == [4.0] * 4
    assert out["hubs"] == [0]
    assert out["signs"] == [1, 1, 1, 1]


def test_attention_only_variant_is_self_loop():
    out = cengcn.transform(star(), {"transform.variant": "AD"})
    np.testing.assert_array_equal(out["diagonal"], np.ones(5))
    assert "signs" not in out


def test_invalid_config_raises():
    with pytest.raises(cengcn.ConfigError):
        cengcn.transform(star(), {"transform.q": 0.5})
    with pytest.raises(cengcn.ConfigError):
        cengcn.resolve_config({"no.such_key": 1})
    assert issubclass(cengcn.ConfigError, cengcn.Error)


def test_disconnected_eigenvector_raises_data_error():
    g = cengcn.Graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    with pytest.raises(cengcn.DataError):
        cengcn.eigenvector_centrality(g)


def test_missing_file_raises_io_error(tmp_path):
    with pytest.raises(cengcn.IoError):
        cengcn.load_edge_list(str(tmp_path / "missing.txt"))


def test_load_edge_list(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("a b\nb c\n")
    g = cengcn.load_edge_list(str(path))
    assert g.num_vertices == 3
    assert g.ids == ["a", "b", "c"]


def test_generators():
    g = cengcn.generate_scale_free(100, 2, 1)
    assert g.num_vertices == 100
    assert g.component_count() == 1
    g2, classes = cengcn.generate_planted(60, 2, 3, 0.1, 5)
    assert g2.num_vertices == 60
    assert sorted(set(classes)) == [0, 1, 2]
    assert cengcn.generate_scale_free(100, 2, 1).edges == g.edges


def test_metrics_trivial_cases():
    preds = np.array([[0.9, 0.1], [0.2, 0.8]])
    assert cengcn.accuracy(preds, [0, 1], [0, 1]) == 1.0
    assert cengcn.auc([0.3] * 6, [1, 0, 1, 0, 1, 0]) == 0.5
    assert cengcn.nmi([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0


def test_power_law_alpha_is_finite():
    g = cengcn.generate_scale_free(500, 2, 3)
    alpha = cengcn.power_law_alpha(list(g.degree))
    assert math.isfinite(alpha) and alpha > 1.0


def test_classify_run_is_deterministic():
    cfg = {"data.generator": "planted", "data.gen_n": 60, "model.iterations": 30}
    a = cengcn.run(cfg, keep_embeddings=True)
    b = cengcn.run(cfg, keep_embeddings=True)
    assert a["metric"] == "accuracy"
    assert 0.0 <= a["value"] <= 1.0
    assert len(a["train_loss"]) == 30
    assert a["train_loss"] == b["train_loss"]
    np.testing.assert_array_equal(a["embeddings"], b["embeddings"])
    assert a["embeddings"].shape[0] == 60


def test_config_keys_and_resolution():
    keys = cengcn.config_keys()
    assert "transform.r" in keys and "model.layers" in keys
    text = cengcn.resolve_config({"model.task": "cluster"})
    assert "lr = 0.001" in text
    assert "iterations = 150" in text
