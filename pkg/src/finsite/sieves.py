"""Sieves on a finite category, represented as int bitmasks over morphisms.

A sieve on c is a set of arrows with codomain c closed under composition on
the right.  Masks index the parent category's morphism list, so sieves on
different objects live in the same bit space; the base object is carried
alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

from .category import bits
from .errors import CodomainMismatch, TypeMismatch


@dataclass(frozen=True)
class Sieve:
    base: int
    arrows: int  # bitmask over parent morphism indices

    def arrow_indices(self):
        return tuple(bits(self.arrows))

    def __contains__(self, f):
        return bool(self.arrows >> f & 1)

    def is_empty(self):
        return self.arrows == 0


def is_right_closed(category, mask):
    for f in bits(mask):
        if category.principal_sieve(f) & ~mask:
            return False
    return True


def generate_mask(category, arrows):
    mask = 0
    for f in arrows:
        mask |= category.principal_sieve(f)
    return mask


def generate_sieve(category, c, arrows):
    """Smallest sieve on c containing the given arrow indices."""
    for f in arrows:
        if category.cod[f] != c:
            raise CodomainMismatch(
                "arrow %r does not end at %r"
                % (category.morphisms[f], category.objects[c])
            )
    return Sieve(c, generate_mask(category, arrows))


def pullback_mask(category, mask, h):
    """Mask of h^*(S) = {g : h after g lands in S}, a sieve on dom(h)."""
    out = 0
    for g in category.into(category.dom[h]):
        if mask >> category.compose(h, g) & 1:
            out |= 1 << g
    return out


def pullback_sieve(category, sieve, h):
    if category.cod[h] != sieve.base:
        raise TypeMismatch(
            "cannot pull back a sieve on %r along %r"
            % (category.objects[sieve.base], category.morphisms[h])
        )
    return Sieve(category.dom[h], pullback_mask(category, sieve.arrows, h))


def sieve_masks_on(category, c):
    """All sieve masks on c, ascending.  Cached on the category."""
    cached = category._sieves.get(c)
    if cached is not None:
        return cached
    arrows = category.into(c)
    k = len(arrows)
    out = []
    for pick in range(1 << k):
        mask = 0
        for i in range(k):
            if pick >> i & 1:
                mask |= 1 << arrows[i]
        if is_right_closed(category, mask):
            out.append(mask)
    out = tuple(sorted(out))
    category._sieves[c] = out
    return out


def sieves_on(category, c):
    return tuple(Sieve(c, m) for m in sieve_masks_on(category, c))


def is_sieve_connected(category, sieve):
    """Zig-zag connectivity of the sieve's arrows in the slice over its base.

    The empty sieve counts as disconnected.
    """
    arrows = sieve.arrow_indices()
    if not arrows:
        return False
    pos = {f: i for i, f in enumerate(arrows)}
    root = list(range(len(arrows)))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for f in arrows:
        for g in category.into(category.dom[f]):
            h = category.compose(f, g)
            if h in pos:
                a, b = find(pos[f]), find(pos[h])
                if a != b:
                    root[max(a, b)] = min(a, b)
    return len({find(i) for i in range(len(arrows))}) == 1
