"""
Event frequencies for growing n
===============================

Counts the min event (smallest center value under threshold + g delta), the
joint event (also max <= g) and failures of the tail bound, for Rademacher
coefficients.
"""

from kaclab.lab import ExperimentConfig, run_theorem_experiment

cfg = ExperimentConfig(law="rademacher", n_list=(64, 128, 256), p=1.0, beta=1.0,
                       regime="half", trials=60, master_seed=0, roots=True)
rep = run_theorem_experiment(cfg)
print(" n    P(min)  P(joint)  P(F fail)  roots-in-region  mean min|G|")
for r in rep.rows:
    print(f"{r.n:4d}  {r.p_min_event:6.3f}  {r.p_joint_event:8.3f}  {r.p_Fn_fail:9.3f}  "
          f"{r.root_in_region_rate:15.3f}  {r.mean_min_modulus:.3e}")
for fam, fit in rep.slopes.items():
    print(f"{fam}: " + ("too few hits for a slope" if fit is None else f"slope {fit.slope:.2f}"))

# a larger beta shrinks both the threshold and the balls
tight = run_theorem_experiment(ExperimentConfig(n_list=(64, 128, 256), beta=2.0, trials=60))
print("beta=2 min-event counts:", [r.count_min_event for r in tight.rows])
