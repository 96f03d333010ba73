"""Monotone maps θ: [k] → [n], stored as the tuple (θ(0), ..., θ(k)).

A simplex x of degree n pulls back along θ to θ*x of degree k; faces are
∂_i = δ_i* and degeneracies s_j = σ_j*.
"""
from __future__ import annotations

from functools import lru_cache


def identity(n: int) -> tuple:
    return tuple(range(n + 1))


def coface(i: int, n: int) -> tuple:
    """δ_i: [n-1] → [n], skipping i."""
    return tuple(k if k < i else k + 1 for k in range(n))


def codegeneracy(j: int, n: int) -> tuple:
    """σ_j: [n+1] → [n], hitting j twice."""
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def compose(theta: tuple, phi: tuple) -> tuple:
    """θ∘φ"""
    return tuple(theta[k] for k in phi)


def is_monotone(theta) -> bool:
    return all(a <= b for a, b in zip(theta, theta[1:]))


@lru_cache(maxsize=None)
def factor(theta: tuple, n: int):
    """Split θ*: the faces to apply (in order) and then the degeneracies."""
    image = sorted(set(theta))
    if image and (image[0] < 0 or image[-1] > n):
        raise ValueError(f"{theta} is not a map into [{n}]")
    faces = [i for i in range(n, -1, -1) if i not in set(image)]
    pos = {v: r for r, v in enumerate(image)}
    epi = [pos[v] for v in theta]
    degens = [j for j in range(len(epi) - 1) if epi[j] == epi[j + 1]]
    return tuple(faces), tuple(degens)


def surjection_from_word(word, k: int) -> tuple:
    """Surjection [k + len(word)] → [k] of s_{j1}...s_{jm} (j1 > ... > jm)."""
    surj = list(range(k + 1))
    for j in sorted(word):
        surj.insert(j, surj[j])
    return tuple(surj)


def word_from_surjection(surj) -> tuple:
    return tuple(sorted((j for j in range(len(surj) - 1) if surj[j] == surj[j + 1]), reverse=True))


def is_surjection(surj, k: int) -> bool:
    return is_monotone(surj) and bool(surj) and surj[0] == 0 and surj[-1] == k and \
        all(b - a <= 1 for a, b in zip(surj, surj[1:]))


def front(i: int) -> tuple:
    return tuple(range(i + 1))


def back(i: int, n: int) -> tuple:
    return tuple(range(i, n + 1))
