"""Independent replay of the documented seeded procedures (see include/qacg/rng.hpp).

Used to freeze expected values into the C++ tests. Run: python3 tests/oracles/rng_oracle.py
"""
M = (1 << 64) - 1


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h ^= b
        h = (h * 0x100000001B3) & M
    return h


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
    return z ^ (z >> 31)


def derive_seed(seed: int, tag: str) -> int:
    return mix64(seed ^ fnv1a64(tag))


class Rng:
    def __init__(self, seed: int):
        self.state = seed & M

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & M
        return mix64(self.state)

    def uniform(self, n: int) -> int:
        threshold = ((1 << 64) - n) % n
        x = self.next()
        while x < threshold:
            x = self.next()
        return x % n

    def sample(self, items, m):
        items = list(items)
        m = min(m, len(items))
        for i in range(m):
            j = i + self.uniform(len(items) - i)
            items[i], items[j] = items[j], items[i]
        return items[:m]


if __name__ == "__main__":
    # Extension context: 10-sentence article, passage covers sids {0, 1}, k = 5, seed = 7.
    print("extension seed 7:", sorted(Rng(7).sample(range(2, 10), 5)))
    # First seeds whose first two-way draw is 0 and 1.
    print("uniform(2) seeds:", [(s, Rng(s).uniform(2)) for s in range(6)])
    print("first 12 raw draws seed 0:", [hex(v) for v in [Rng(0).next()]])
    print("derive_seed(13, 'a:0-4'):", hex(derive_seed(13, "a:0-4")))
    print("fnv1a64('Budapest is in Europe.'):", "%016x" % fnv1a64("Budapest is in Europe."))
    # Balanced filter 5/7/6 with seed 42: sampled positions within each class.
    for label, n in (("SUPPORTED", 5), ("REFUTED", 7), ("NEI", 6)):
        print(label, sorted(Rng(derive_seed(42, label)).sample(range(n), 5)))
