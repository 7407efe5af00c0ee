"""
Information-set decoding
========================

Plant a low-weight error, compute its syndrome and recover it with the
decoders in the package. Every decoder counts its row operations.
"""

import numpy as np
from grassmann_isd.codes import build_ldpc, build_plabic_code, lift_code, random_code
from grassmann_isd.decoder import (DecoderConfig, birthday_isd, bitflip_decode, correctness_transform,
                                   plucker_decode, prange_isd, syndrome_check,
                                   systematic_parity_check)
from grassmann_isd.field import FqMatrix, GF2m, mat_mul

code = random_code(30, 15, seed=2)
h = code.parity_check
e = np.zeros(30, dtype=np.int64)
e[[3, 11, 25]] = 1
s = (h.data @ e) % 2

# Prange: a random information set, one elimination, check the residual weight
out = prange_isd(h, s, 3, DecoderConfig(T=2000, seed=1))
print("prange", out.success, out.iterations_used, out.row_ops, np.flatnonzero(out.error_vector))

# Stern-style birthday search lets p errors sit inside the information set
out = birthday_isd(h, s, 3, DecoderConfig(T=2000, p=1, l=2, seed=1))
print("birthday", out.success, out.iterations_used, out.row_ops)

# a windowed decoder for plabic codes, measured in the rank of the error
pcode = build_plabic_code(20, 10, seed=3)
e = np.zeros(20, dtype=np.int64)
e[[4, 9]] = 1
s = (pcode.parity_check.data @ e) % 2
out = plucker_decode(pcode, s, 2, DecoderConfig(T=500, seed=0))
print("plucker", out.success, out.diagnostics, syndrome_check(pcode.parity_check, out.error_vector, s))

# the same search over GF(4), where weight means the rank of the unfolded error
gf4 = GF2m(2)
qcode = lift_code(FqMatrix(np.random.default_rng(0).integers(0, 4, size=(4, 4)), gf4))
x = FqMatrix([[2, 2, 0, 0, 0, 0, 0, 0]], gf4)
s = mat_mul(qcode.parity_check, x.T).data[:, 0]
out = plucker_decode(qcode, s, 1, DecoderConfig(T=200, seed=0))
print("gf4", out.success, out.weight_found, out.error_vector)

# in systematic form [[I, 0, H'], [0, I, H'']] a candidate is checked block by block
h1 = FqMatrix([[1, 0, 1]])
h2 = FqMatrix([[0, 1, 1], [1, 1, 0]])
hs = systematic_parity_check(h1, h2)
x = np.array([1, 0, 1, 0, 0, 1])
rep = correctness_transform(h1, h2, x, (hs.data @ x) % 2)
print(rep.consistent, rep.identity_blocks)

# bit flipping on a sparse code corrects a single flip in a few rounds
ldpc = build_ldpc(24, 3, 6, seed=0)
e = np.zeros(24, dtype=np.int64)
e[7] = 1
out = bitflip_decode(ldpc.sparse_checks, (ldpc.sparse_checks.data @ e) % 2, 1)
print("bitflip", out.success, np.flatnonzero(out.error_vector))
