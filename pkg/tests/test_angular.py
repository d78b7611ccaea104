import numpy as np
import pytest

from schwinger import (
    add,
    adjoint,
    build_basis,
    build_set,
    casimir,
    casimir_residual,
    commutator,
    extract_block,
    scale,
)

from conftest import dense_angular_momentum, max_entry_diff


@pytest.fixture(scope="module")
def amset20():
    return build_set(build_basis(20), 1.0)


class TestBuildSet:
    def test_spin_half_block_is_half_pauli(self):
        amset = build_set(build_basis(1), 1.0)
        block = extract_block(amset, 1)
        assert np.allclose(block.jz, np.diag([0.5, -0.5]), atol=1e-15)
        assert np.allclose(block.jx, [[0, 0.5], [0.5, 0]], atol=1e-15)
        assert np.allclose(block.jy, [[0, -0.5j], [0.5j, 0]], atol=1e-15)

    def test_jtot_diagonal_nmax2(self):
        amset = build_set(build_basis(2), 1.0)
        diag = np.diag(amset.jtot.to_dense()).real
        assert np.allclose(diag, [0, 0.5, 0.5, 1, 1, 1], atol=1e-15)

    def test_commutation_relation_example(self, amset20):
        resid = add(
            commutator(amset20.jx, amset20.jy), scale(amset20.jz, -1j)
        )
        assert resid.fro_norm() < 1e-12

    def test_hbar_scaling(self):
        block = extract_block(build_set(build_basis(1), 2.0), 1)
        assert np.allclose(block.jz, np.diag([1.0, -1.0]), atol=1e-15)

    def test_invalid_hbar(self):
        with pytest.raises(ValueError):
            build_set(build_basis(1), 0.0)

    def test_matches_dense_construction(self):
        basis = build_basis(5)
        amset = build_set(basis, 1.0)
        dx, dy, dz, dt = dense_angular_momentum(basis, 1.0)
        for dense, op in ((dx, amset.jx), (dy, amset.jy), (dz, amset.jz),
                          (dt, amset.jtot)):
            assert max_entry_diff(dense, op) < 1e-13


@pytest.mark.parametrize("n_max", [0, 1, 2, 3, 5, 8, 12, 20])
class TestAlgebraInvariants:
    def test_cyclic_commutators(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        for a, b, c in ((s.jx, s.jy, s.jz), (s.jy, s.jz, s.jx),
                        (s.jz, s.jx, s.jy)):
            resid = add(commutator(a, b), scale(c, -1j * s.hbar))
            assert resid.fro_norm() < 1e-12

    def test_casimir_commutes(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        cas = casimir(s)
        for op in (s.jx, s.jy, s.jz):
            assert commutator(cas, op).fro_norm() < 1e-12

    def test_total_is_conserved(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        for op in (s.jx, s.jy, s.jz):
            assert commutator(op, s.jtot).fro_norm() < 1e-12

    def test_hermiticity(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        for op in (s.jx, s.jy, s.jz, s.jtot):
            assert add(op, scale(adjoint(op), -1.0)).max_abs() < 1e-13

    def test_block_diagonal_structure(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        totals = np.array([p.total for p in s.basis.states])
        for op in (s.jx, s.jy, s.jz, s.jtot):
            if op.nnz:
                assert np.array_equal(totals[op.rows], totals[op.cols])

    def test_allowed_j_values_and_degeneracy(self, n_max):
        s = build_set(build_basis(n_max), 1.0)
        diag = np.diag(s.jtot.to_dense()).real
        values, counts = np.unique(diag, return_counts=True)
        assert np.allclose(values, [0.5 * n for n in range(n_max + 1)], atol=1e-15)
        # each j = n/2 appears exactly 2j + 1 times
        assert list(counts) == [n + 1 for n in range(n_max + 1)]


class TestBlocks:
    def test_vacuum_block(self):
        amset = build_set(build_basis(3), 1.0)
        block = extract_block(amset, 0)
        assert block.dim == 1
        assert block.jx[0, 0] == 0 and block.jy[0, 0] == 0 and block.jz[0, 0] == 0

    def test_spin_one_block(self):
        amset = build_set(build_basis(3), 1.0)
        block = extract_block(amset, 2)
        assert np.allclose(block.jz, np.diag([1.0, 0.0, -1.0]), atol=1e-15)
        r = 1 / np.sqrt(2)
        expected_jx = np.array([[0, r, 0], [r, 0, r], [0, r, 0]])
        assert np.allclose(block.jx, expected_jx, atol=1e-15)

    def test_blocks_hermitian(self):
        amset = build_set(build_basis(9), 1.0)
        for n in range(10):
            block = extract_block(amset, n)
            for m in (block.jx, block.jy, block.jz):
                assert np.max(np.abs(m - m.conj().T)) < 1e-13

    def test_out_of_range(self):
        amset = build_set(build_basis(2), 1.0)
        with pytest.raises(ValueError):
            extract_block(amset, 3)

    @pytest.mark.parametrize("n_max", [1, 4, 9])
    def test_top_shell_block_is_exact(self, n_max):
        # the su(2) algebra must hold on the highest block with no
        # degradation: J products never leave a block upward
        block = extract_block(build_set(build_basis(n_max), 1.0), n_max)
        comm = block.jx @ block.jy - block.jy @ block.jx
        assert np.max(np.abs(comm - 1j * block.jz)) < 1e-13
        cas = block.jx @ block.jx + block.jy @ block.jy + block.jz @ block.jz
        j = n_max / 2
        assert np.max(np.abs(cas - j * (j + 1) * np.eye(n_max + 1))) < 1e-12


class TestCasimir:
    def test_block_values(self):
        amset = build_set(build_basis(2), 1.0)
        cas = casimir(amset).to_dense()
        b0 = amset.basis.block_range(0)
        b1 = amset.basis.block_range(1)
        b2 = amset.basis.block_range(2)
        assert cas[b0.start, b0.start] == pytest.approx(0.0, abs=1e-14)
        sub1 = cas[b1.start:b1.stop, b1.start:b1.stop]
        assert np.allclose(sub1, 0.75 * np.eye(2), atol=1e-14)
        sub2 = cas[b2.start:b2.stop, b2.start:b2.stop]
        assert np.allclose(sub2, 2.0 * np.eye(3), atol=1e-14)

    def test_residual_quantum(self, amset20):
        assert casimir_residual(amset20, 1.0).max_abs() < 1e-12

    def test_residual_classical_form(self, amset20):
        # at epsilon = 0 the residual reduces to hbar * J entrywise
        diff = add(
            casimir_residual(amset20, 0.0), scale(amset20.jtot, -amset20.hbar)
        )
        assert diff.max_abs() < 1e-12

    def test_residual_intermediate_epsilon(self, amset20):
        # residual(eps) - residual(1) = (1 - eps) hbar J for any eps
        diff = add(
            casimir_residual(amset20, 0.25),
            scale(amset20.jtot, -0.75 * amset20.hbar),
        )
        assert diff.max_abs() < 1e-12

    def test_residual_on_vacuum_basis(self):
        amset = build_set(build_basis(0), 1.0)
        assert casimir_residual(amset, 1.0).max_abs() == 0.0

    def test_residual_scales_with_hbar(self):
        amset = build_set(build_basis(4), 2.0)
        assert casimir_residual(amset, 1.0).max_abs() < 1e-12
        diff = add(casimir_residual(amset, 0.0), scale(amset.jtot, -2.0))
        assert diff.max_abs() < 1e-12
