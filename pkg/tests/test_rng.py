import hashlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sparse_legendre.rng import derive_seed, generator, stream


def test_streams_reproduce():
    a = generator(123).uniform(size=5)
    b = generator(123).uniform(size=5)
    np.testing.assert_array_equal(a, b)


def test_derive_seed_golden():
    # frozen values; other implementations must reproduce them
    assert derive_seed(0, "fig1", 5) == 384816526796406649
    raw = b"i" + (0).to_bytes(8, "little") + b"s" + (4).to_bytes(4, "little") + b"fig1" + b"i" + (5).to_bytes(8, "little")
    assert int.from_bytes(hashlib.blake2b(raw, digest_size=8).digest(), "little") == 384816526796406649
    np.testing.assert_array_equal(generator(7).uniform(-1, 1, 3),
                                  [-0.06236502608813432, -0.14770832752163066, -0.27403659833279836])


def test_derive_seed_is_stable():
    s = derive_seed(0, "fig1", 5)
    assert 0 <= s < 2**64
    assert s != derive_seed(0, "fig1", 6)
    assert derive_seed(0, "1") != derive_seed(0, 1)


@given(st.integers(0, 2**64 - 1), st.lists(st.one_of(st.integers(0, 10**6), st.text(max_size=5)), max_size=4))
def test_derive_seed_deterministic(master, path):
    assert derive_seed(master, *path) == derive_seed(master, *path)


def test_path_elements_are_typed():
    with pytest.raises(TypeError):
        derive_seed(0, 0.5)


def test_stream_matches_generator():
    np.testing.assert_array_equal(stream(9, "a", 1).random(4), generator(derive_seed(9, "a", 1)).random(4))


def test_pairwise_distinct_children():
    seeds = {derive_seed(1, "x", i, j) for i in range(50) for j in range(50)}
    assert len(seeds) == 2500
