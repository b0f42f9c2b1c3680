"""Where does the deeper wedge power start to win?

The p = 1 bound grows like 2.5 n^2 while p = 2 grows like 8 n^2 / 3,
but p = 2 pays a much larger error term.  Printing both raw formulas
side by side shows the crossover landing exactly after n = 84.
"""

from trc.certify import best_p, crossover_table, theorem_rank_lb

rows = crossover_table(100)
interesting = [3, 10, 30, 60, 80, 83, 84, 85, 86, 90, 100]

print(f"{'n':>4} {'p=1':>8} {'p=2':>8} {'winner':>7}")
for row in rows:
    if row["n"] not in interesting:
        continue
    print(f"{row['n']:>4} {row['bound_p1']:>8} {row['bound_p2']:>8} {row['winner']:>7}")

print()
print("raw values go negative for tiny n because the error term dominates;")
print("the usable bound clamps at the trivial n*m, e.g.")
n = 10
print(f"  n = {n}: raw p=2 value {rows[n - 3]['bound_p2']} vs clamped", theorem_rank_lb(n, n, 2))

print()
for n in (84, 85):
    p_star, bound = best_p(n, n)
    print(f"best choice at n = {n}: p = {p_star} with bound {bound}")
