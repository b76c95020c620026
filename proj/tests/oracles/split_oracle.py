"""Reference seeded shuffle used to freeze the split expectations in test_split.cpp."""
import math

M = (1 << 64) - 1


class MT64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & M
        for i in range(1, 312):
            self.mt[i] = (6364136223846793005 * (self.mt[i - 1] ^ (self.mt[i - 1] >> 62)) + i) & M
        self.idx = 312

    def _twist(self):
        for i in range(312):
            x = (self.mt[i] & 0xFFFFFFFF80000000) | (self.mt[(i + 1) % 312] & 0x7FFFFFFF)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.idx = 0

    def next(self):
        if self.idx >= 312:
            self._twist()
        y = self.mt[self.idx]
        self.idx += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & M

    def index(self, bound):
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound


def split(ids, seed, fraction):
    ids = sorted(ids)
    rng = MT64(seed)
    for i in range(len(ids) - 1, 0, -1):
        j = rng.index(i + 1)
        ids[i], ids[j] = ids[j], ids[i]
    k = min(max(math.ceil(fraction * len(ids) - 1e-9), 1), len(ids) - 1)
    return sorted(ids[:k]), sorted(ids[k:])


if __name__ == "__main__":
    # std::mt19937_64 default-seed check value (10000th output)
    g = MT64(5489)
    for _ in range(9999):
        g.next()
    print("check", g.next() == 9981545732273789042)
    print(split(["id%d" % i for i in range(10)], 7, 0.5))
    print(split(["id%d" % i for i in range(10)], 8, 0.3))
