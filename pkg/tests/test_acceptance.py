"""End-to-end acceptance checks for the benchmark toolkit.

Each test prints a single PASS/FAIL line so the whole gate can be read off a
plain pytest -s run. The heavier solver checks share one cached batch of runs.
"""

import numpy as np
import pytest

from dascmop.algorithms import fast_nondominated_sort
from dascmop.core import constrained_dominates
from dascmop.harness import (
    ExperimentSpec,
    rank_sum_exact_p,
    run_experiment,
    wilcoxon_rank_sum,
)
from dascmop.metrics import (
    feasible_ratio_mc,
    generate_reference_front,
    igd,
)
from dascmop.problems import make_problem
from dascmop.toolkit import (
    DEFAULT_ELLIPSES,
    type3_ellipse_constraint,
    type3_ellipse_constraint_matrix,
)


def report(name, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}" + (f" — {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_zero_triplet_neutrality():
    rng = np.random.default_rng(0)
    worst = 0.0
    for pid in range(1, 10):
        inst = make_problem(pid, (0, 0, 0))
        x = rng.random((100_000, inst.spec.n))
        _, c = inst.evaluate_batch(x)
        worst = max(worst, float((-np.minimum(c, 0)).sum(axis=1).max()))
    report(
        "criterion 1: zero-triplet instances are violation-free on 1e5 random points each",
        worst == 0.0,
        f"max violation {worst!r}",
    )


def test_criterion_2_ellipse_form_equivalence():
    rng = np.random.default_rng(1)
    f = rng.uniform(-1, 3, (10_000, 2))
    gap = 0.0
    for ellipse in DEFAULT_ELLIPSES:
        r = rng.random()
        a = type3_ellipse_constraint(f, ellipse, r)
        b = type3_ellipse_constraint_matrix(f, ellipse, r)
        gap = max(gap, float(np.abs(a - b).max()))
    report(
        "criterion 2: expanded and matrix ellipse constraints agree on 1e4 points",
        gap <= 1e-12,
        f"max |difference| {gap:.3e}",
    )


def test_criterion_3_feasibility_monotone_in_zeta():
    ratios = [
        feasible_ratio_mc(make_problem(1, (0, z, 0)), samples=100_000, seed=2)
        for z in (0.0, 0.25, 0.5, 0.75)
    ]
    ok = ratios[0] == 1.0 and all(a > b for a, b in zip(ratios, ratios[1:]))
    report(
        "criterion 3: feasible ratio strictly decreases over zeta {0,0.25,0.5,0.75}",
        ok,
        "ratios " + ", ".join(f"{r:.4f}" for r in ratios),
    )


def test_criterion_4_segment_measure():
    rng = np.random.default_rng(3)
    x1 = rng.random(1_000_000)
    measure = float(np.mean(np.sin(20 * np.pi * x1) >= 0.0))
    ok = abs(measure - 0.5) <= 0.005
    report(
        "criterion 4: measure of x1 with sin(20*pi*x1) >= 0 is 0.500 +/- 0.005",
        ok,
        f"estimate {measure:.4f}",
    )


def brute_force_front_peeling(f, violation):
    remaining = list(range(len(f)))
    fronts = []
    while remaining:
        layer = [
            i
            for i in remaining
            if not any(
                constrained_dominates(f[j], violation[j], f[i], violation[i])
                for j in remaining
                if j != i
            )
        ]
        fronts.append(sorted(layer))
        remaining = [i for i in remaining if i not in layer]
    return fronts


def igd_double_loop(reference, approx):
    total = 0.0
    for r in reference:
        best = min(float(np.sqrt(((r - a) ** 2).sum())) for a in approx)
        total += best
    return total / len(reference)


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(4)

    sort_ok = True
    for _ in range(200):
        n = int(rng.integers(2, 51))
        f = np.round(rng.random((n, 2)), 2)
        violation = np.where(rng.random(n) < 0.5, 0.0, np.round(rng.random(n), 2))
        _, fronts = fast_nondominated_sort(f, violation)
        if [sorted(fr.tolist()) for fr in fronts] != brute_force_front_peeling(f, violation):
            sort_ok = False
            break

    igd_gap = 0.0
    for _ in range(20):
        ref = rng.random((40, 2))
        approx = rng.random((25, 2))
        igd_gap = max(igd_gap, abs(igd(ref, approx) - igd_double_loop(ref, approx)))

    wilcoxon_gap = 0.0
    for _ in range(50):
        a = rng.random(8)
        b = rng.random(8) + rng.uniform(-0.3, 0.3)
        p_norm, _ = wilcoxon_rank_sum(a, b)
        wilcoxon_gap = max(wilcoxon_gap, abs(p_norm - rank_sum_exact_p(a, b)))

    ok = sort_ok and igd_gap <= 1e-12 and wilcoxon_gap <= 0.02
    report(
        "criterion 5: sorting, IGD, and Wilcoxon match their brute-force oracles",
        ok,
        f"sort={'ok' if sort_ok else 'mismatch'}, igd gap {igd_gap:.2e}, "
        f"wilcoxon gap {wilcoxon_gap:.4f}",
    )


def desk_scale_batch(tmp_path_factory, tag):
    out = tmp_path_factory.mktemp(f"desk_{tag}")
    records = run_experiment(
        ExperimentSpec(
            problems=(1,),
            triplets=((0.0, 0.0, 0.0),),
            algorithms=("moead-cdp",),
            runs=10,
            base_seed=42,
            out_dir=out / "easy",
        )
    )
    records += run_experiment(
        ExperimentSpec(
            problems=(1,),
            triplets=((0.0, 0.5, 0.0),),
            algorithms=("moead-cdp", "nsga2-cdp"),
            runs=10,
            base_seed=42,
            out_dir=out / "hard",
        )
    )

    def mean_igd(triplet, algo):
        vals = [r.final_igd for r in records if r.triplet == triplet and r.algorithm == algo]
        assert len(vals) == 10
        return float(np.mean(vals))

    return {
        ("moead-cdp", (0.0, 0.0, 0.0)): mean_igd((0.0, 0.0, 0.0), "moead-cdp"),
        ("moead-cdp", (0.0, 0.5, 0.0)): mean_igd((0.0, 0.5, 0.0), "moead-cdp"),
        ("nsga2-cdp", (0.0, 0.5, 0.0)): mean_igd((0.0, 0.5, 0.0), "nsga2-cdp"),
    }


@pytest.fixture(scope="module")
def desk_scale_means(tmp_path_factory):
    return desk_scale_batch(tmp_path_factory, "a")


def test_criterion_6_published_table_reproduction(desk_scale_means):
    moead_easy = desk_scale_means[("moead-cdp", (0.0, 0.0, 0.0))]
    moead_hard = desk_scale_means[("moead-cdp", (0.0, 0.5, 0.0))]
    nsga2_hard = desk_scale_means[("nsga2-cdp", (0.0, 0.5, 0.0))]
    ok = 0.05 <= moead_easy <= 0.30 and nsga2_hard < moead_hard
    report(
        "criterion 6: desk-scale means reproduce the published interval and direction",
        ok,
        f"moead(0,0,0)={moead_easy:.4e} in [0.05,0.30]; "
        f"nsga2(0,0.5,0)={nsga2_hard:.4e} < moead(0,0.5,0)={moead_hard:.4e}",
    )


def test_criterion_7_determinism(desk_scale_means, tmp_path_factory):
    repeat = desk_scale_batch(tmp_path_factory, "b")
    ok = all(repeat[k] == desk_scale_means[k] for k in desk_scale_means)
    report(
        "criterion 7: repeating the desk-scale batch gives bit-identical means",
        ok,
        "; ".join(
            f"{k[0]}{k[1]}: {desk_scale_means[k]!r} vs {repeat[k]!r}" for k in desk_scale_means
        ),
    )


def test_criterion_8_reference_front_stability():
    worst = 0.0
    for triplet in ((0, 0, 0), (0, 0.5, 0), (0, 0, 0.5)):
        inst = make_problem(1, triplet)
        coarse = generate_reference_front(inst, 1000).points
        fine = generate_reference_front(inst, 2000).points
        worst = max(worst, igd(fine, coarse), igd(coarse, fine))
    report(
        "criterion 8: fronts at resolution 1000 vs 2000 differ by IGD < 2e-3",
        worst < 2e-3,
        f"max IGD {worst:.3e}",
    )
