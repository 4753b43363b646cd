"""Seeded deterministic random streams."""

import random

MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class RngStream:
    """Deterministic stream: identical seed gives an identical draw sequence.

    Concurrent consumers should each hold their own stream obtained via
    spawn(), which mixes the stream id into the seed.
    """

    __slots__ = ("seed", "random", "randint", "getrandbits")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        r = random.Random(self.seed)
        self.random = r.random
        self.randint = r.randint
        self.getrandbits = r.getrandbits

    def spawn(self, stream: int) -> "RngStream":
        return RngStream(_splitmix64(self.seed ^ _splitmix64(stream & MASK64)))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"
