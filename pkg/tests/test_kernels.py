import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from affsums import kernels
from affsums.characters import MultChar
from affsums.charsum import char_sum
from affsums.ff import make_field
from affsums.rng import SplitMix64
from affsums.subspace import AffineSubspace, random_subspace

needs_numba = pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba disabled")


@st.composite
def instances(draw):
    f = make_field(*draw(st.sampled_from([(3, 1), (5, 1), (2, 2), (7, 1)])))
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, n))
    L = random_subspace(f, n, m, SplitMix64(draw(st.integers(0, 2 ** 63))))
    chis = [MultChar(f, draw(st.integers(1, f.order - 1))) for _ in range(n)]
    return L, chis, draw(st.integers(1, 3))


@needs_numba
@given(instances())
def test_backends_agree(inst):
    L, chis, r = inst
    if L.field.q ** (r * L.d) > 200_000:
        return
    a = char_sum(L, chis, r, backend="numba").value
    b = char_sum(L, chis, r, backend="numpy").value
    assert a.coeffs == b.coeffs


def test_numpy_chunk_boundaries(monkeypatch):
    L = AffineSubspace(make_field(3), [[1, 1, 1, 1]], [1])
    chis = [MultChar(L.field, 1)] * 4
    whole = char_sum(L, chis, 2, backend="numpy").value
    monkeypatch.setattr(kernels, "NUMPY_CHUNK", 7)
    assert char_sum(L, chis, 2, backend="numpy").value.coeffs == whole.coeffs


def test_exp_table_matches_field():
    f = make_field(3, 4)
    gen_digits = [(f.generator // 3 ** i) % 3 for i in range(4)]
    tab = kernels.exp_table(3, 4, np.asarray(f.modulus, dtype=np.int64), np.asarray(gen_digits, dtype=np.int64))
    assert np.array_equal(tab[: f.order], f.exp[: f.order])


def test_unknown_backend():
    L = AffineSubspace(make_field(3), [[1, 1]], [1])
    with pytest.raises(ValueError):
        char_sum(L, [MultChar(L.field, 1)] * 2, backend="cuda")


def test_env_flag_selects_fallback():
    env = dict(os.environ, AFFSUMS_NO_JIT="1")
    code = "from affsums import kernels; print(kernels.BACKEND, kernels.HAS_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]
