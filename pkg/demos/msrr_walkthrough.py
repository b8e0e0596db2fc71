"""The scalar minimum-storage code, end to end on a tiny cluster.

Each node stores one field symbol.  Any k nodes recover the message, and
a failed node is rebuilt from its rack's other u - 1 symbols plus one
aggregate (the rack sum) from each of dbar helper racks.
"""

import itertools
import random

from rarc import MsrrCode, SystemParams, make_field

rng = random.Random(7)

p = SystemParams(n=6, u=2, k=4, dbar=1)
field = make_field(p.n, p.u, "prime")
print(f"field: {field} with primitive xi={field.xi} and order-{field.u} eta={field.eta}")

code = MsrrCode.build(p, field)
print(f"check exponents T={code.T}, so the code carries B={code.B} message symbols")
print(f"evaluation points (rack-major): {code.lam}")
print(f"systematic layout: message at {code.info_set}, checks solved at {code.parity_set}")

message = [rng.randrange(field.q) for _ in range(code.B)]
codeword = code.encode(message)
print(f"\nmessage  {message}")
print(f"codeword {codeword}  (position e*u+g belongs to node (e,g))")
assert code.parity_ok(codeword)

# Any k = 4 of the 6 nodes reconstruct the message.
for subset in itertools.combinations(range(p.n), p.k):
    assert code.reconstruct([(i, codeword[i]) for i in subset]) == message
print(f"all {len(list(itertools.combinations(range(p.n), p.k)))} four-node subsets reconstruct")

# Repair node (1, 0): its rack mate contributes one symbol locally, and a
# single helper rack ships the sum of its two symbols -- one symbol over
# the rack boundary instead of k.
failed = (1, 0)
local = [codeword[p.node_index(1, 1)]]
for helper in (0, 2):
    response = code.helper_response(helper, codeword[helper * p.u : (helper + 1) * p.u])
    repaired = code.repair(failed, local, [(helper, response)])
    print(f"helper rack {helper} sends {response}; repaired symbol = {repaired}")
    assert repaired == codeword[p.node_index(*failed)]

# With no helper racks at all (dbar=0) every rack sums to zero, so repair
# is purely local -- and the code is a locally repairable one.
p0 = SystemParams(n=6, u=3, k=4, dbar=0)
code0 = MsrrCode.build(p0, make_field(6, 3, "prime"))
cw0 = code0.encode([rng.randrange(7) for _ in range(code0.B)])
got = code0.repair_local((0, 2), [cw0[0], cw0[1]])
print(f"\ndbar=0 local repair: {got} (expected {cw0[2]})")
assert got == cw0[2]
print(f"its minimum distance by enumeration: {code0.minimum_distance()} = n - k + 1")
