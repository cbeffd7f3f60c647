"""Stable seed derivation for reproducible, parallel-safe RNG streams.

Python's builtin hash() is salted per process, so task seeds are derived
from blake2b instead: the same (master_seed, *parts) always yields the
same 64-bit seed, in any worker process on any platform.
"""

import hashlib


def derive_seed(master_seed: int, *parts) -> int:
    """Derive a 64-bit seed from a master seed and a task key.

    Parts may be ints or strings; they are length-prefixed so that
    ("ab", "c") and ("a", "bc") hash differently.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(master_seed)).encode())
    for part in parts:
        token = str(part).encode()
        h.update(b"|%d|" % len(token))
        h.update(token)
    return int.from_bytes(h.digest(), "big")
