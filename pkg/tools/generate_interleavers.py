"""Regenerate the shipped couple-interleaver permutation files."""
from mvplc.turbo.codec import INTERLEAVE_LEN
from mvplc.turbo.interleaver import (default_seed, permutation_file,
                                     s_random_permutation, write_permutation)

if __name__ == "__main__":
    for pb_size, n in INTERLEAVE_LEN.items():
        target = s_random_permutation(n, seed=default_seed(pb_size))
        write_permutation(permutation_file(pb_size), target, pb_size)
        print(pb_size, n, permutation_file(pb_size))
