import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionkit import _kernels as K
from fusionkit.catalog import dihedral, elem_abelian, quaternion, semidihedral
from fusionkit.plattice import PGroup

needs_numba = pytest.mark.skipif(K.closure_nb is None, reason="numba not installed")

GROUPS = [PGroup(dihedral(4), 2), PGroup(quaternion(3), 2), PGroup(semidihedral(4), 2),
          PGroup(elem_abelian(3, 2), 3)]

cases = st.tuples(st.integers(0, len(GROUPS) - 1), st.lists(st.integers(0, 10**6), max_size=3))


@needs_numba
@settings(max_examples=60, deadline=None)
@given(cases)
def test_closure_paths_agree(case):
    gi, raw = case
    S = GROUPS[gi]
    gens = np.array([r % S.n for r in raw], dtype=np.int64)
    a = K.closure_np(S.table.mul, gens)
    b = K.closure_nb(S.table.mul, gens)
    assert (a == b).all()
    assert S.n % int(a.sum()) == 0


@needs_numba
@settings(max_examples=60, deadline=None)
@given(cases)
def test_extend_hom_paths_agree(case):
    gi, raw = case
    S = GROUPS[gi]
    mul = S.table.mul
    gens = np.asarray(S.gens, dtype=np.int64)
    imgs = np.array([raw[k % len(raw)] % S.n if raw else 0 for k in range(len(gens))],
                    dtype=np.int64)
    a = K.extend_hom_np(mul, gens, mul, imgs)
    b = K.extend_hom_nb(mul, gens, mul, imgs)
    assert (a is None) == (b is None)
    if a is not None:
        assert (a == b).all()
        # a homomorphism respects the table
        for x in range(S.n):
            assert (a[mul[x]] == mul[a[x], a]).all()


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(GROUPS) - 1), st.integers(0, 10**6))
def test_conjugate_rows_paths_agree(gi, k):
    S = GROUPS[gi]
    x = S.rows[k % S.n]
    a = K.conjugate_rows_np(S.rows, x)
    b = K.conjugate_rows_nb(S.rows, x)
    assert (a == b).all()
    # row i is g x g^-1 computed directly
    g = S.rows[k % S.n]
    ginv = np.argsort(g)
    assert (a[k % S.n] == g[x[ginv]]).all()


def test_identity_map_extends():
    S = GROUPS[0]
    phi = K.extend_hom(S.table.mul, S.gens, S.table.mul, S.gens)
    assert (phi == np.arange(S.n)).all()


def _use_numba_in_subprocess(value):
    env = dict(os.environ)
    env.pop("FUSIONKIT_NO_NUMBA", None)
    if value is not None:
        env["FUSIONKIT_NO_NUMBA"] = value
    out = subprocess.run([sys.executable, "-c", "from fusionkit import _kernels as K; print(K.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_switch_selects_numpy():
    assert _use_numba_in_subprocess("1") == "False"


@needs_numba
def test_numba_selected_by_default():
    assert _use_numba_in_subprocess(None) == "True"
