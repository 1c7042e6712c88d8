"""Seeded pseudorandom functions of coordinate bit patterns.

Used to realize "arbitrary" phi-functions deterministically: equal inputs
(bit for bit) always give equal outputs, and nothing is stored.
"""

import hashlib
import struct

import numpy as np

_SCALE = 2.0 ** -53
_MASK64 = 0xFFFFFFFFFFFFFFFF


def derive_seed(seed: int, *tags: int) -> int:
    """Independent 64-bit seed for a sub-stream labelled by ``tags``."""
    words = np.random.SeedSequence([int(seed), *map(int, tags)]).generate_state(2, np.uint32)
    return int(words[0]) | (int(words[1]) << 32)


_PAIR = struct.Struct("<dd").pack


def _message(coords) -> bytes:
    return b"".join([_PAIR(z.real, z.imag) for z in coords])


def prf_uniform(seed: int, coords) -> float:
    """A single uniform value in ``[0, 1)`` keyed by ``seed``."""
    digest = hashlib.blake2b(_message(coords), digest_size=8,
                             key=struct.pack("<Q", seed & _MASK64)).digest()
    return (int.from_bytes(digest, "little") >> 11) * _SCALE


def prf_uniforms(seed: int, coords, count: int) -> np.ndarray:
    """``count`` uniforms in ``[0, 1)``; blocks of 8 use distinct salts."""
    msg = _message(coords)
    key = struct.pack("<Q", seed & _MASK64)
    chunks = []
    for block in range((count + 7) // 8):
        chunks.append(hashlib.blake2b(msg, digest_size=64, key=key,
                                      salt=struct.pack("<Q", block)).digest())
    words = np.frombuffer(b"".join(chunks), dtype="<u8")[:count]
    return (words >> np.uint64(11)).astype(float) * _SCALE
