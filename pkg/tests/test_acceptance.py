"""Exit criteria for the package, one test per criterion.

Each criterion is a plain function returning ``(passed, detail)``; the
tests assert on it and record a line that the terminal summary prints.
Running this file directly prints the same lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from itertools import combinations

import pytest

from jsjtree.blocks import augmented_graph_of_blocks, check_m1, check_m2
from jsjtree.commensurability import (Verdict, enumerate_matchings, forest_matching, genus_family,
                                      is_matching, matching_obstruction, matching_vector,
                                      vectors_commensurable)
from jsjtree.oracles import coarsest_equitable_bruteforce, matchings_bruteforce
from jsjtree.refinement import (degree_partition, degree_refinement, is_quasi_isometric,
                                refinement_equivalent)
from jsjtree.splitting import find_split_sites, split_vertex, truncated_block_tree, unwrap_to_tree

from conftest import matrix
from generators import (doubled_triangle, random_bipartite, random_connected, random_tree,
                        random_uniform_forest, relabeled, star)

REFERENCE_MATRICES = ("leaf_bundles", "block_cycle", "facing_bundles", "surface_amalgam")
RESULTS: dict[int, str] = {}


def reference_matrices_reproduce():
    bad = [n for n in REFERENCE_MATRICES
           if refinement_equivalent(degree_refinement(augmented_graph_of_blocks(matrix(n))), matrix(n)) is None]
    return not bad, f"{len(REFERENCE_MATRICES) - len(bad)}/{len(REFERENCE_MATRICES)} matrices reproduced"


def reference_verdicts():
    got = {}
    for n in REFERENCE_MATRICES:
        M = matrix(n)
        m1, m2 = check_m1(M), check_m2(M)
        got[n] = (m1.holds, len(m1.cycle) if m1.cycle else None,
                  m2.holds if m1.holds else None,
                  m2.witness.path if m1.holds and m2.witness else None)
    want = {
        "leaf_bundles": (True, None, True, None),
        "block_cycle": (False, 6, None, None),
        "facing_bundles": (True, None, False, ("t1", "f3", "t3", "f4", "t2")),
        "surface_amalgam": (True, None, True, None),
    }
    wrong = [n for n in REFERENCE_MATRICES if got[n] != want[n]]
    return not wrong, "all four verdicts match" if not wrong else f"mismatch on {wrong}"


def unwrap_sizes():
    details, ok = [], True
    for name, splits, size in (("surface_amalgam", 3, 16), ("leaf_bundles", 2, 8)):
        g0 = augmented_graph_of_blocks(matrix(name))
        res = unwrap_to_tree(g0)
        this = (len(res.trace) == splits and len(res.tree) == size and res.tree.is_tree()
                and bool(is_quasi_isometric(g0, res.tree)))
        ok &= this
        details.append(f"{name}: {len(res.trace)} splits, {len(res.tree)} vertices")
    return ok, "; ".join(details)


def splits_preserve_refinement(pairs=1000, seed=4):
    rng = random.Random(seed)
    done = failures = 0
    while done < pairs:
        g = random_connected(rng, rng.randint(2, 9), rng.randint(0, 3))
        sites = find_split_sites(g)
        if not sites:
            continue
        out = split_vertex(g, rng.choice(sites)).graph
        failures += refinement_equivalent(degree_refinement(g), degree_refinement(out)) is None
        done += 1
    return failures == 0, f"{done - failures}/{done} splits preserved the refinement"


def trees_satisfy_conditions(trees=1000, seed=5):
    rng = random.Random(seed)
    good = 0
    for _ in range(trees):
        M = degree_refinement(random_tree(rng, rng.randint(2, 14), max_mult=1))
        good += bool(check_m1(M)) and bool(check_m2(M))
    return good == trees, f"{good}/{trees} trees pass M1 and M2"


def partition_matches_oracle(samples=10_000, seed=6):
    rng = random.Random(seed)
    agree = 0
    for _ in range(samples):
        g = random_bipartite(rng, max_vertices=6, max_mult=3, density=rng.choice((0.3, 0.5, 0.8)))
        agree += degree_partition(g).as_sets() == coarsest_equitable_bruteforce(g).as_sets()
    return agree == samples, f"{agree}/{samples} partitions agree"


def forest_matchings(forests=500, seed=7):
    rng = random.Random(seed)
    valid = 0
    for i in range(forests):
        p = random_uniform_forest(rng, 3 + i % 2, components=rng.randint(1, 3))
        valid += is_matching(p, forest_matching(p).chosen)
    p = doubled_triangle()
    solver, oracle = enumerate_matchings(p), matchings_bruteforce(p)
    ok = valid == forests and solver == [] and oracle == []
    return ok, (f"{valid}/{forests} forest matchings valid; doubled triangle: "
                f"{len(solver)} solver, {len(oracle)} oracle matchings")


def star_vectors():
    v = matching_vector(star([-1, -2, -3])).vector
    w = matching_vector(star([-2, -4, -6])).vector
    k = vectors_commensurable(v, w)
    ok = v == (-1, -2, -3) and w == (-2, -4, -6) and k == (2, 1)
    return ok, f"{v} and {w}, witness {k}"


def genus_family_obstructed():
    base = star([-1, -2, -3])
    family = [genus_family(base, "s1", g) for g in range(1, 6)]
    pairs = list(combinations(family, 2))
    hit = sum(matching_obstruction(a, b).verdict is Verdict.OBSTRUCTED for a, b in pairs)
    return hit == len(pairs) == 10, f"{hit}/{len(pairs)} pairs obstructed"


def _split_randomly(rng, g, rounds):
    for _ in range(rounds):
        sites = find_split_sites(g)
        if not sites:
            break
        g = split_vertex(g, rng.choice(sites)).graph
    return g


def truncations_agree(pairs=100, seed=10):
    rng = random.Random(seed)
    agree = done = 0
    while done < pairs:
        g = random_connected(rng, rng.randint(2, 8), rng.randint(0, 2))
        g2 = relabeled(rng, g)
        if done % 2:
            g2 = _split_randomly(rng, g2, rng.randint(1, 3))
        M, M2 = degree_refinement(g), degree_refinement(g2)
        perm = refinement_equivalent(M, M2)
        done += 1
        if perm is None:
            continue
        agree += all(truncated_block_tree(M, i, d, c).code == truncated_block_tree(M2, perm(i), d, c).code
                     for i in range(M.order) for d in range(5) for c in (1, 2, 3))
    return agree == pairs, f"{agree}/{pairs} pairs agree at depth <= 4, cap <= 3"


CRITERIA = {
    1: ("reference matrices reproduce", reference_matrices_reproduce),
    2: ("reference matrix verdicts", reference_verdicts),
    3: ("unwrapping sizes", unwrap_sizes),
    4: ("splits preserve the refinement", splits_preserve_refinement),
    5: ("random trees satisfy M1 and M2", trees_satisfy_conditions),
    6: ("refinement agrees with the partition oracle", partition_matches_oracle),
    7: ("matching existence and impossibility", forest_matchings),
    8: ("star matching vectors", star_vectors),
    9: ("genus family is pairwise obstructed", genus_family_obstructed),
    10: ("truncated block trees agree", truncations_agree),
}


def run_criterion(n: int) -> tuple[bool, str]:
    title, func = CRITERIA[n]
    start = time.perf_counter()
    ok, detail = func()
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}: {detail} ({time.perf_counter() - start:.2f}s)"
    RESULTS[n] = line
    return ok, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, line = run_criterion(n)
    print(line)
    assert ok, line


if __name__ == "__main__":
    outcomes = [run_criterion(n) for n in sorted(CRITERIA)]
    for _, line in outcomes:
        print(line)
    sys.exit(0 if all(ok for ok, _ in outcomes) else 1)
