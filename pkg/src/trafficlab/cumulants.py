"""Moment / free-cumulant calculus over non-crossing partitions.

A MomentOracle evaluates words of generator atoms; free cumulants are
obtained from it by the standard recursion over non-crossing partitions and
memoized per word (cyclic minimal rotation when the oracle is tracial).
Built-in cumulant specifications cover semicircular and circular families,
free Haar unitaries, classical real Gaussians (as a moment oracle), and
constants.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping

from .caps import Caps, default_caps
from .graphs import EdgeAtom, parse_word
from .partitions import catalan, noncrossing

__all__ = [
    "MomentOracle",
    "CumulantSpec",
    "moment_cumulants",
    "moments_to_cumulants",
    "cumulants_to_moments",
    "kappa_pi",
    "builtin",
    "SemicircularSpec",
    "CircularSpec",
    "HaarUnitarySpec",
    "ConstantSpec",
    "gaussian_real_oracle",
    "table_oracle",
]

Word = tuple


def _cyclic_min(word: Word) -> Word:
    if len(word) <= 1:
        return word
    rots = [word[i:] + word[:i] for i in range(len(word))]
    return min(rots)


def nc_index_partitions(n: int) -> tuple:
    """Non-crossing partitions of range(n) as tuples of index tuples (cached)."""
    cached = _NC_CACHE.get(n)
    if cached is None:
        cached = tuple(tuple(tuple(b) for b in p.blocks)
                       for p in noncrossing(range(n), _UNCAPPED))
        _NC_CACHE[n] = cached
    return cached


_NC_CACHE: dict[int, tuple] = {}
_UNCAPPED = Caps(partition=12)


class MomentOracle:
    """Word evaluator phi with phi(empty) = 1 and a declared traciality flag."""

    def __init__(self, evaluator: Callable[[Word], complex], tracial: bool = True,
                 alphabet: Iterable[str] | None = None):
        self._eval = evaluator
        self.tracial = tracial
        self.alphabet = tuple(alphabet) if alphabet is not None else None

    def phi(self, word: Word) -> complex:
        word = tuple(word)
        if not word:
            return 1.0 + 0.0j
        if self.alphabet is not None:
            for a in word:
                if a.generator not in self.alphabet:
                    raise ValueError(f"unknown generator {a.generator!r}")
        return complex(self._eval(word))


class CumulantSpec:
    """Evaluator for the full cumulant on a word of atoms."""

    source = "abstract"

    def kappa(self, word: Word) -> complex:
        raise NotImplementedError


class _MomentCumulantSpec(CumulantSpec):
    """Cumulants of a moment oracle via the partition recursion."""

    source = "from-moments"

    def __init__(self, oracle: MomentOracle, caps: Caps | None = None):
        self.oracle = oracle
        self.caps = caps or default_caps()
        self._memo: dict[Word, complex] = {}

    def _key(self, word: Word) -> Word:
        return _cyclic_min(word) if self.oracle.tracial else word

    def kappa(self, word: Word) -> complex:
        word = tuple(word)
        n = len(word)
        if n == 0:
            raise ValueError("cumulant of the empty word is undefined")
        self.caps.check_word(n)
        key = self._key(word)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if n == 1:
            val = self.oracle.phi(word)
        else:
            val = self.oracle.phi(word)
            for blocks in nc_index_partitions(n):
                if len(blocks) == 1:
                    continue
                term = 1.0 + 0.0j
                for b in blocks:
                    term *= self.kappa(tuple(word[i] for i in b))
                    if term == 0:
                        break
                val -= term
        self._memo[key] = val
        return val


def moment_cumulants(oracle: MomentOracle, caps: Caps | None = None) -> CumulantSpec:
    return _MomentCumulantSpec(oracle, caps)


def moments_to_cumulants(oracle: MomentOracle, word: Word,
                         caps: Caps | None = None) -> complex:
    """Full cumulant kappa_n of the word under the oracle's moments."""
    return _MomentCumulantSpec(oracle, caps).kappa(tuple(word))


def kappa_pi(spec: CumulantSpec, word: Word, partition) -> complex:
    """Multiplicative extension: product of kappa over the blocks."""
    from .partitions import SetPartition, is_noncrossing
    word = tuple(word)
    if isinstance(partition, SetPartition):
        if not is_noncrossing(partition):
            raise ValueError("kappa_pi needs a non-crossing partition")
        pos = {x: i for i, x in enumerate(partition.ground)}
        blocks = [tuple(sorted(pos[x] for x in b)) for b in partition.blocks]
    else:
        blocks = [tuple(b) for b in partition]
    out = 1.0 + 0.0j
    for b in blocks:
        out *= spec.kappa(tuple(word[i] for i in b))
        if out == 0:
            break
    return out


def cumulants_to_moments(spec: CumulantSpec, word: Word,
                         caps: Caps | None = None) -> complex:
    """Moment of a word: sum of kappa_pi over all non-crossing partitions."""
    word = tuple(word)
    if not word:
        return 1.0 + 0.0j
    (caps or default_caps()).check_word(len(word))
    total = 0.0 + 0.0j
    for blocks in nc_index_partitions(len(word)):
        total += kappa_pi(spec, word, blocks)
    return total


# ---------------------------------------------------------------------------
# built-in distributions
# ---------------------------------------------------------------------------

def _as_matrix(m, size: int):
    rows = [list(r) for r in m]
    if len(rows) != size or any(len(r) != size for r in rows):
        raise ValueError("covariance matrix has the wrong shape")
    return [[complex(x) for x in r] for r in rows]


class SemicircularSpec(CumulantSpec):
    """Semicircular family: kappa_2 given by a covariance matrix, all other
    cumulants zero.  Self-adjoint, so star labels are ignored."""

    source = "semicircular"

    def __init__(self, generators=("a",), cov=None):
        self.generators = tuple(generators)
        if cov is None:
            cov = [[1.0 if i == j else 0.0 for j in self.generators] for i in self.generators]
        self.cov = _as_matrix(cov, len(self.generators))
        self._idx = {g: i for i, g in enumerate(self.generators)}

    def kappa(self, word: Word) -> complex:
        if len(word) != 2:
            return 0.0 + 0.0j
        try:
            i, j = self._idx[word[0].generator], self._idx[word[1].generator]
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r}") from None
        return self.cov[i][j]


class CircularSpec(CumulantSpec):
    """Circular family with covariance kappa_2[a_i, a_j*] and pseudo-covariance
    kappa_2[a_i, a_j]; all other cumulants vanish."""

    source = "circular"

    def __init__(self, generators=("a",), cov=None, pseudo=None):
        self.generators = tuple(generators)
        k = len(self.generators)
        if cov is None:
            cov = [[1.0 if i == j else 0.0 for j in range(k)] for i in range(k)]
        if pseudo is None:
            pseudo = [[0.0] * k for _ in range(k)]
        self.cov = _as_matrix(cov, k)
        self.pseudo = _as_matrix(pseudo, k)
        self._idx = {g: i for i, g in enumerate(self.generators)}

    def kappa(self, word: Word) -> complex:
        if len(word) != 2:
            return 0.0 + 0.0j
        x, y = word
        try:
            i, j = self._idx[x.generator], self._idx[y.generator]
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r}") from None
        if not x.star and not y.star:
            return self.pseudo[i][j]
        if x.star and y.star:
            return self.pseudo[i][j].conjugate()
        if not x.star and y.star:
            return self.cov[i][j]
        return self.cov[j][i]


class HaarUnitarySpec(CumulantSpec):
    """Free Haar unitaries: nonzero cumulants only on cyclically alternating
    words u, u*, ... of even length 2k, with value (-1)^(k-1) Cat(k-1)."""

    source = "haar_unitary"

    def __init__(self, generators=("u",)):
        self.generators = tuple(generators)

    def kappa(self, word: Word) -> complex:
        n = len(word)
        gens = {a.generator for a in word}
        if len(gens) != 1:
            return 0.0 + 0.0j
        if next(iter(gens)) not in self.generators:
            raise ValueError(f"unknown generator {word[0].generator!r}")
        if n % 2 == 1:
            return 0.0 + 0.0j
        if any(word[i].star == word[(i + 1) % n].star for i in range(n)):
            return 0.0 + 0.0j
        k = n // 2
        return complex((-1) ** (k - 1) * catalan(k - 1))


class ConstantSpec(CumulantSpec):
    """A constant c: kappa_1 = c and nothing else."""

    source = "constant"

    def __init__(self, value: complex, generator: str = "c"):
        self.value = complex(value)
        self.generator = generator

    def kappa(self, word: Word) -> complex:
        if len(word) == 1 and word[0].generator == self.generator:
            return self.value
        return 0.0 + 0.0j


def gaussian_real_oracle(mean: float = 0.0, var: float = 1.0,
                         generator: str = "d") -> MomentOracle:
    """Classical real Gaussian moments as an oracle on one generator.

    m_n = mean m_{n-1} + (n-1) var m_{n-2}; stars are ignored.
    """
    memo = {0: 1.0, 1: float(mean)}

    def m(n: int) -> float:
        if n not in memo:
            memo[n] = mean * m(n - 1) + (n - 1) * var * m(n - 2)
        return memo[n]

    def evaluator(word: Word) -> complex:
        for a in word:
            if a.generator != generator:
                raise ValueError(f"unknown generator {a.generator!r}")
        return complex(m(len(word)))

    return MomentOracle(evaluator, tracial=True, alphabet=(generator,))


def table_oracle(table: Mapping, tracial: bool = True) -> MomentOracle:
    """Moment oracle backed by a word -> value table.

    Keys may be strings like ``"a b* a"`` or atom tuples.  Under traciality
    the lookup is by minimal cyclic rotation.  Missing words raise KeyError.
    """
    norm: dict[Word, complex] = {}
    for key, value in table.items():
        word = parse_word(key) if isinstance(key, str) else tuple(key)
        norm[_cyclic_min(word) if tracial else word] = complex(value)

    def evaluator(word: Word) -> complex:
        key = _cyclic_min(word) if tracial else tuple(word)
        if key not in norm:
            raise KeyError(f"moment table has no entry for {key!r}")
        return norm[key]

    return MomentOracle(evaluator, tracial=tracial)


def builtin(name: str, **params) -> CumulantSpec:
    """Factory for the named cumulant specifications."""
    if name == "semicircular":
        return SemicircularSpec(params.get("generators", ("a",)), params.get("cov"))
    if name == "circular":
        return CircularSpec(params.get("generators", ("a",)),
                            params.get("cov"), params.get("pseudo"))
    if name == "haar_unitary":
        return HaarUnitarySpec(params.get("generators", ("u",)))
    if name == "constant":
        return ConstantSpec(params.get("value", 0.0), params.get("generator", "c"))
    if name == "gaussian_real":
        oracle = gaussian_real_oracle(params.get("mean", 0.0), params.get("var", 1.0),
                                      params.get("generator", "d"))
        return moment_cumulants(oracle, params.get("caps"))
    if name == "moments":
        oracle = table_oracle(params["table"], params.get("tracial", True))
        return moment_cumulants(oracle, params.get("caps"))
    raise ValueError(f"unknown distribution {name!r}")
