"""Representations of a presentation into U(N).

A representation assigns one unitary matrix per generator.  Validity means
every relator evaluates to the identity and every peripheral word lands in
its target conjugacy class, both within the representation's tolerance.

Deformations are parametrized on the left throughout the package:
rho_t(x) = exp(t u_x) rho(x).  The derivative of a word map in that
parametrization is the twisted (Fox calculus) transport implemented by
:func:`word_transport_terms`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .presentation import Presentation, Word
from .unitary import (
    ad_matrix,
    charpoly_coefficients,
    charpoly_directions,
    class_residual,
    diagonal_model,
    exponential,
    haar_from_rng,
    matrix_from_json,
    matrix_to_json,
    skew_basis,
    unvec_skew,
)


class NoConvergenceError(RuntimeError):
    """Gauss-Newton refinement stalled before reaching the target tolerance."""

    def __init__(self, message: str, best: "Representation", residuals: "Residuals", iterations: int):
        super().__init__(message)
        self.best = best
        self.residuals = residuals
        self.iterations = iterations


class NotFoundError(RuntimeError):
    """No valid representation found within the attempt budget."""


def default_tolerance(rank: int) -> float:
    # residual scales grow with the matrix size; keep defaults relative to N
    return 1e-8 * rank


@dataclass(frozen=True)
class Representation:
    presentation: Presentation
    matrices: tuple[np.ndarray, ...]
    tolerance: float

    def __init__(self, presentation: Presentation, matrices: Sequence[np.ndarray],
                 tolerance: float | None = None):
        if len(matrices) != len(presentation.generators):
            raise ValueError(
                f"{len(matrices)} matrices for {len(presentation.generators)} generators"
            )
        n = presentation.rank
        mats = []
        for m in matrices:
            a = np.array(m, dtype=complex)
            if a.shape != (n, n):
                raise ValueError(f"matrix shape {a.shape}, expected {(n, n)}")
            a.setflags(write=False)
            mats.append(a)
        object.__setattr__(self, "presentation", presentation)
        object.__setattr__(self, "matrices", tuple(mats))
        object.__setattr__(
            self, "tolerance", default_tolerance(n) if tolerance is None else float(tolerance)
        )

    @property
    def rank(self) -> int:
        return self.presentation.rank

    def generator(self, name: str) -> np.ndarray:
        return self.matrices[self.presentation.generator_index(name)]


@dataclass(frozen=True)
class Residuals:
    relator_residuals: tuple[float, ...]
    peripheral_residuals: tuple[float, ...]

    @property
    def max(self) -> float:
        return max(self.relator_residuals + self.peripheral_residuals, default=0.0)


def evaluate_word(rep: Representation, word: Word) -> np.ndarray:
    """Ordered product of generator matrices and inverses; empty word is the identity."""
    out = np.eye(rep.rank, dtype=complex)
    for gen, sign in word:
        m = rep.matrices[gen]
        out = out @ (m if sign > 0 else m.conj().T)
    return out


def word_transport_terms(matrices: Sequence[np.ndarray], word: Word):
    """Fox-calculus terms of the left-log derivative of the word map.

    Yields (generator index, sign, prefix) such that the derivative of the
    word value W in direction (u_x) is  (sum_terms sign * Ad(prefix) u_gen) W.
    Encodes the cocycle rules u(vw) = u(v) + Ad(rho(v)) u(w) and
    u(x') = -Ad(rho(x')) u(x).
    """
    n = matrices[0].shape[0]
    prefix = np.eye(n, dtype=complex)
    for gen, sign in word:
        if sign > 0:
            yield gen, 1.0, prefix
            prefix = prefix @ matrices[gen]
        else:
            prefix = prefix @ matrices[gen].conj().T
            yield gen, -1.0, prefix


def transport_apply(matrices: Sequence[np.ndarray], word: Word,
                    u: Sequence[np.ndarray]) -> np.ndarray:
    """Word transport applied to a tangent vector (one skew matrix per generator)."""
    n = matrices[0].shape[0] if len(matrices) else 1
    out = np.zeros((n, n), dtype=complex)
    for gen, sign, prefix in word_transport_terms(matrices, word):
        out = out + sign * (prefix @ u[gen] @ prefix.conj().T)
    return out


def transport_matrix(rep: Representation, word: Word) -> np.ndarray:
    """Real matrix (N^2, n_gen * N^2) of the word transport in B-coordinates."""
    n = rep.rank
    q = n * n
    n_gen = len(rep.presentation.generators)
    out = np.zeros((q, n_gen * q))
    for gen, sign, prefix in word_transport_terms(rep.matrices, word):
        out[:, gen * q:(gen + 1) * q] += sign * ad_matrix(prefix)
    return out


def constraint_residual(rep: Representation) -> Residuals:
    """Frobenius distance to the identity per relator; class residual per peripheral."""
    eye = np.eye(rep.rank)
    rel = tuple(
        float(np.linalg.norm(evaluate_word(rep, r) - eye)) for r in rep.presentation.relators
    )
    per = tuple(
        float(class_residual(evaluate_word(rep, p.word), p.klass))
        for p in rep.presentation.peripherals
    )
    return Residuals(rel, per)


def is_valid(rep: Representation, tolerance: float | None = None) -> bool:
    tol = rep.tolerance if tolerance is None else tolerance
    return constraint_residual(rep).max <= tol


def _residual_vector(rep: Representation) -> np.ndarray:
    """Smooth residual components: relator entry gaps and peripheral charpoly gaps."""
    eye = np.eye(rep.rank)
    parts = []
    for r in rep.presentation.relators:
        d = evaluate_word(rep, r) - eye
        parts.append(d.real.ravel())
        parts.append(d.imag.ravel())
    for p in rep.presentation.peripherals:
        w = evaluate_word(rep, p.word)
        d = charpoly_coefficients(w) - charpoly_coefficients(diagonal_model(p.klass))
        parts.append(d.real)
        parts.append(d.imag)
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def _word_directions(rep: Representation, word: Word) -> np.ndarray:
    """dW/d(coordinates) for the word value W: array (n_gen * N^2, N, N)."""
    n = rep.rank
    q = n * n
    basis = skew_basis(n)
    n_gen = len(rep.presentation.generators)
    w_val = evaluate_word(rep, word)
    out = np.zeros((n_gen * q, n, n), dtype=complex)
    for gen, sign, prefix in word_transport_terms(rep.matrices, word):
        moved = np.einsum("ij,ajk,lk->ail", prefix, basis, prefix.conj())
        out[gen * q:(gen + 1) * q] += sign * np.einsum("aij,jk->aik", moved, w_val)
    return out


def _residual_jacobian(rep: Representation) -> np.ndarray:
    """Analytic Jacobian of `_residual_vector` in left-exponential coordinates."""
    n = rep.rank
    q = n * n
    cols = len(rep.presentation.generators) * q
    blocks = []
    for r in rep.presentation.relators:
        dw = _word_directions(rep, r)
        blocks.append(dw.reshape(cols, q).real.T)
        blocks.append(dw.reshape(cols, q).imag.T)
    for p in rep.presentation.peripherals:
        w_val = evaluate_word(rep, p.word)
        dw = _word_directions(rep, p.word)
        _, dc = charpoly_directions(w_val, dw)
        blocks.append(dc.real.T)
        blocks.append(dc.imag.T)
    if not blocks:
        return np.zeros((0, cols))
    return np.vstack(blocks)


def _retract(rep: Representation, step: np.ndarray) -> Representation:
    """Left-exponential update of every generator by the stacked coordinate step."""
    n = rep.rank
    q = n * n
    mats = []
    for i, m in enumerate(rep.matrices):
        x = unvec_skew(step[i * q:(i + 1) * q], n)
        mats.append(exponential(x) @ m)
    return Representation(rep.presentation, mats, rep.tolerance)


def refine(rep: Representation, max_iterations: int = 50, target_tolerance: float = 1e-10,
           rank_rtol: float = 1e-8, trace: list | None = None) -> Representation:
    """Gauss-Newton refinement onto the constraint variety.

    Minimizes the sum of squared relator and class residuals over one
    skew-Hermitian tangent per generator, retracted via the left
    exponential.  Steps are minimal-norm least-squares solutions; a step is
    halved until the objective decreases, so accepted iterates never
    increase it.  Returns the first iterate whose max residual is at or
    below the target; raises :class:`NoConvergenceError` otherwise, with
    the best iterate attached.
    """
    current = rep
    res = constraint_residual(current)
    if trace is not None:
        trace.append(float(_residual_vector(current) @ _residual_vector(current)))
    if res.max <= target_tolerance:
        return current
    best = (res.max, current)
    for _ in range(max_iterations):
        r = _residual_vector(current)
        obj = float(r @ r)
        jac = _residual_jacobian(current)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=rank_rtol)
        alpha = 1.0
        cand = None
        cand_obj = obj
        while alpha >= 1e-12:
            trial = _retract(current, alpha * step)
            tr = _residual_vector(trial)
            tobj = float(tr @ tr)
            if tobj < obj:
                cand, cand_obj = trial, tobj
                break
            alpha *= 0.5
        if cand is None:
            raise NoConvergenceError(
                f"no descent step found; best residual {best[0]:.3e}",
                best[1], constraint_residual(best[1]), max_iterations,
            )
        current = cand
        if trace is not None:
            trace.append(cand_obj)
        res = constraint_residual(current)
        if res.max < best[0]:
            best = (res.max, current)
        if res.max <= target_tolerance:
            return Representation(current.presentation, current.matrices, target_tolerance)
    raise NoConvergenceError(
        f"no convergence in {max_iterations} iterations; best residual {best[0]:.3e}",
        best[1], constraint_residual(best[1]), max_iterations,
    )


def find_representation(pres: Presentation, seed: int = 0, attempts: int = 50,
                        target_tolerance: float = 1e-10,
                        max_iterations: int = 80) -> Representation:
    """Search for a valid representation by seeded random starts plus refinement.

    Generators that appear as single-letter peripheral words start as random
    conjugates of the class's diagonal model, everything else starts Haar.
    Deterministic in the seed: attempt seeds are spawned from the master seed
    and tried in order; the first refined success is returned.
    """
    single: dict[int, tuple] = {}
    for p in pres.peripherals:
        if len(p.word) == 1:
            gen, sign = p.word[0]
            single.setdefault(gen, (p.klass, sign))
    for child in np.random.SeedSequence(seed).spawn(attempts):
        rng = np.random.default_rng(child)
        mats = []
        for i in range(len(pres.generators)):
            if i in single:
                spec, sign = single[i]
                h = haar_from_rng(rng, pres.rank)
                v = h @ diagonal_model(spec) @ h.conj().T
                mats.append(v if sign > 0 else v.conj().T)
            else:
                mats.append(haar_from_rng(rng, pres.rank))
        start = Representation(pres, mats, target_tolerance)
        try:
            return refine(start, max_iterations, target_tolerance)
        except NoConvergenceError:
            continue
    raise NotFoundError(f"no representation of {pres.name!r} found in {attempts} attempts")


def commutant_dimension(rep: Representation, rank_rtol: float = 1e-8) -> int:
    """Complex dimension of the matrices commuting with the whole image.

    Nullity of the stacked Sylvester system M rho(x) - rho(x) M over all
    generators; 1 means irreducible.
    """
    n = rep.rank
    eye = np.eye(n)
    blocks = [np.kron(m, eye) - np.kron(eye, m.T) for m in rep.matrices]
    if not blocks:
        return n * n
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return n * n
    return int(n * n - np.sum(s > rank_rtol * s[0]))


def conjugate(rep: Representation, g: np.ndarray) -> Representation:
    """Simultaneous conjugation of every generator matrix by g."""
    gh = g.conj().T
    return Representation(
        rep.presentation, [g @ m @ gh for m in rep.matrices], rep.tolerance
    )


def perturb(rep: Representation, rng: np.random.Generator, size: float) -> Representation:
    """Left-exponential perturbation by a random tangent of total B-norm `size`."""
    n = rep.rank
    q = n * n
    v = rng.standard_normal(q * len(rep.matrices))
    v *= size / np.linalg.norm(v)
    return _retract(rep, v)


def rep_to_json(rep: Representation) -> dict:
    return {
        "presentation": rep.presentation.name,
        "N": rep.rank,
        "tolerance": rep.tolerance,
        "generators": {
            name: matrix_to_json(m)
            for name, m in zip(rep.presentation.generators, rep.matrices)
        },
    }


def rep_from_json(pres: Presentation, data: dict) -> Representation:
    if data.get("presentation") != pres.name:
        raise ValueError(
            f"representation is for {data.get('presentation')!r}, presentation is {pres.name!r}"
        )
    if int(data.get("N", -1)) != pres.rank:
        raise ValueError(f"representation rank {data.get('N')} != presentation rank {pres.rank}")
    gens = data.get("generators", {})
    missing = [g for g in pres.generators if g not in gens]
    if missing:
        raise ValueError(f"missing generator matrices: {missing}")
    mats = [matrix_from_json(gens[g]) for g in pres.generators]
    return Representation(pres, mats, float(data.get("tolerance", default_tolerance(pres.rank))))
