"""
Seeded verification suites
==========================

Each suite draws trial i from a seed derived from (master seed, i), so the
report is the same whether trials run serially or across processes.
"""

from linosc import verify_theorem

for theorem, params, trials in (("thm2", {"n": 5, "k": 3}, 50),
                                ("thm4", None, 10),
                                ("thm5", None, 80),
                                ("thm6_lemma", {"n": 3, "k": 2, "a": 1}, 200)):
    rep = verify_theorem(theorem, params, trials=trials, seed=7)
    print(rep.summary())

serial = verify_theorem("thm2", {"n": 6, "k": 4}, trials=20, seed=1, workers=1)
parallel = verify_theorem("thm2", {"n": 6, "k": 4}, trials=20, seed=1, workers=2)
print("serial == parallel:", serial.dumps() == parallel.dumps())
