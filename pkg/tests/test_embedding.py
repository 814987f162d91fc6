"""Embedder determinism, normalization, and cosine edge cases."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aga.embedding import Embedder, EmbedderConfig, cosine, default_embedder
from aga.errors import DimensionError, EmbeddingUnavailable

texts = st.text(alphabet=st.characters(codec="ascii"), max_size=80)


def test_identical_text_identical_vector(embedder):
    a = embedder.embed("make a cup of coffee")
    b = embedder.embed("make a cup of coffee")
    assert np.array_equal(a, b)


def test_fresh_embedder_is_bitwise_reproducible():
    a = Embedder().embed("practice guitar in the evening")
    b = Embedder().embed("practice guitar in the evening")
    assert a.tobytes() == b.tobytes()


def test_default_dimension(embedder):
    assert embedder.embed("hello").shape == (256,)


def test_vectors_are_unit_norm(embedder):
    vec = embedder.embed("a b c d e f")
    assert np.linalg.norm(vec) == pytest.approx(1.0)


def test_case_and_punctuation_insensitive(embedder):
    assert np.array_equal(embedder.embed("Open the Curtains!"),
                          embedder.embed("open the curtains"))


def test_empty_text_is_zero_vector(embedder):
    assert np.all(embedder.embed("") == 0.0)
    assert np.all(embedder.embed("!!! ???") == 0.0)


def test_cosine_with_zero_vector_is_zero(embedder):
    assert cosine(embedder.embed(""), embedder.embed("anything")) == 0.0


def test_cosine_self_similarity(embedder):
    vec = embedder.embed("have lunch at the cafe")
    assert cosine(vec, vec) == pytest.approx(1.0)


def test_cosine_dimension_mismatch():
    with pytest.raises(DimensionError):
        cosine(np.ones(4), np.ones(8))


def test_returned_vectors_are_read_only(embedder):
    vec = embedder.embed("immutable")
    with pytest.raises(ValueError):
        vec[0] = 5.0


@given(text=texts)
def test_embed_never_crashes_and_norm_is_zero_or_one(text):
    vec = default_embedder().embed(text)
    norm = np.linalg.norm(vec)
    assert norm == pytest.approx(0.0) or norm == pytest.approx(1.0)


@given(a=texts, b=texts)
def test_cosine_symmetric_and_bounded(a, b):
    emb = default_embedder()
    sim = cosine(emb.embed(a), emb.embed(b))
    assert -1.0 - 1e-9 <= sim <= 1.0 + 1e-9
    assert sim == pytest.approx(cosine(emb.embed(b), emb.embed(a)))


def test_config_validation():
    with pytest.raises(ValueError):
        EmbedderConfig(dimension=4)
    with pytest.raises(ValueError):
        EmbedderConfig(mode="quantum")


def test_external_mode_without_endpoint_raises():
    emb = Embedder(EmbedderConfig(mode="external-service"))
    with pytest.raises(EmbeddingUnavailable):
        emb.embed("needs a server")
