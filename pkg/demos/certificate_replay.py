"""Round-trip a certificate through JSON and replay it from scratch.

A certificate is only worth something if someone else can rerun it.
Everything needed is in the payload: the target, the sampled subspace,
the seed, the primes, and the ranks that were observed.  Replaying
reruns the whole pipeline from the recorded seed and the results must
agree field for field.
"""

import json

from trc.certify import Certificate, certify_matmul, replay_certificate

cert = certify_matmul(3, 3, 2, seed=42)
payload = json.dumps(cert.to_json(), indent=2, sort_keys=True)
print(f"certificate for 3x3 times 3x3, wedge power 2 ({len(payload)} bytes):")
print()
for line in payload.splitlines():
    if any(key in line for key in
           ('"format"', '"border_rank_lb"', '"flattening_rank"', '"rank_lb"',
            '"seed"', '"sample_prime"', '"full_rank"')):
        print("  " + line.strip().rstrip(","))
print("  ... plus the sampled subspace and bookkeeping")

reloaded = Certificate.from_json(json.loads(payload))
fresh = replay_certificate(reloaded)
print()
print(f"replayed flattening rank: {fresh.flattening_rank} "
      f"(recorded {reloaded.flattening_rank})")
print(f"replayed border bound:    {fresh.border_rank_lb} "
      f"(recorded {reloaded.border_rank_lb})")
agree = fresh.to_json() == reloaded.to_json()
print(f"full field-for-field agreement: {agree}")
