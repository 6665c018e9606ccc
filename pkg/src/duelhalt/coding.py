"""Number codings used across the package.

Two primitives are fixed once and shared by every module:

* ``pair``/``unpair`` -- the Cantor pairing bijection on pairs of naturals,
  used for move codes and for the short tuples of the number channel
  (``triple``/``untriple`` are the nested forms).
* ``seq_encode``/``seq_decode`` -- a bijection between finite sequences of
  naturals and the naturals, with the empty sequence mapped to 0.  Nesting
  the Cantor pairing would blow up exponentially for long sequences, so
  sequences go through a self-delimiting binary code instead (each element's
  bits are doubled, elements are terminated by ``01``, and the resulting
  bit string is read back as a natural through the usual string bijection).
"""

from __future__ import annotations


def pair(x: int, y: int) -> int:
    """Cantor pairing of two naturals."""
    if x < 0 or y < 0:
        raise ValueError("pair is defined on naturals")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(n: int) -> tuple[int, int]:
    """Inverse of :func:`pair`."""
    if n < 0:
        raise ValueError("unpair is defined on naturals")
    # Largest s with s(s+1)/2 <= n, found exactly via isqrt.
    from math import isqrt

    s = (isqrt(8 * n + 1) - 1) // 2
    base = s * (s + 1) // 2
    y = n - base
    x = s - y
    return x, y


def triple(x: int, y: int, z: int) -> int:
    return pair(x, pair(y, z))


def untriple(n: int) -> tuple[int, int, int]:
    x, rest = unpair(n)
    y, z = unpair(rest)
    return x, y, z


# --- bijection between naturals and finite bit strings ---
#
# 0 <-> "", 1 <-> "0", 2 <-> "1", 3 <-> "00", ...  (binary of n+1 minus the
# leading 1).  This is the standard length-lexicographic enumeration.

def _nat_to_bits(n: int) -> str:
    if n < 0:
        raise ValueError("naturals only")
    return bin(n + 1)[3:]


def _bits_to_nat(bits: str) -> int:
    return int("1" + bits, 2) - 1


def seq_encode(seq) -> int:
    """Encode a finite sequence of naturals as a natural; () -> 0."""
    out = []
    for v in seq:
        b = _nat_to_bits(int(v))
        for ch in b:
            out.append(ch)
            out.append(ch)
        out.append("01")
    return _bits_to_nat("".join(out))


def seq_decode(n: int) -> tuple[int, ...]:
    """Inverse of :func:`seq_encode`.

    Raises ValueError when the bit string is not a valid sequence code
    (odd tail, truncated element).
    """
    bits = _nat_to_bits(n)
    vals: list[int] = []
    cur: list[str] = []
    i = 0
    while i < len(bits):
        if i + 1 >= len(bits):
            raise ValueError("truncated sequence code")
        a, b = bits[i], bits[i + 1]
        i += 2
        if a == b:
            cur.append(a)
        elif a == "0" and b == "1":
            vals.append(_bits_to_nat("".join(cur)))
            cur = []
        else:
            raise ValueError("invalid separator in sequence code")
    if cur:
        raise ValueError("dangling element in sequence code")
    return tuple(vals)
