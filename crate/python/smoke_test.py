#!/usr/bin/env python3
"""End-to-end smoke test for the heisenq_py extension.

Locates the compiled extension under target/ (building it if absent),
imports it, and exercises every exposed entry point once with exact
expected values.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def ensure_extension() -> Path:
    """Return a directory containing an importable heisenq_py.so."""
    candidates = [ROOT / "target" / p / "libheisenq_py.so" for p in ("release", "debug")]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        subprocess.run(["cargo", "build", "-p", "heisenq-py"], cwd=ROOT, check=True)
        lib = candidates[1]
    stage = Path(tempfile.mkdtemp(prefix="heisenq_py."))
    shutil.copy2(lib, stage / "heisenq_py.so")
    return stage


sys.path.insert(0, str(ensure_extension()))

import heisenq_py as hq  # noqa: E402

checks = 0


def check(cond, label):
    global checks
    assert cond, f"failed: {label}"
    checks += 1


# group structure
report = hq.group_check(3)
check(report["group_order"] == 27, "order of H_3")
check(report["passed"], "group check at n = 3")
check(report["commutator_scalar"] == "z3^1", "commutator scalar is the primitive cube root")

xi, eta = hq.Element.xi(3), hq.Element.eta(3)
c = hq.Element.commutator(3)
check(xi * eta == (eta * xi) * c, "commutation relation")
check(xi * eta != eta * xi, "noncommutativity")
check((xi * eta).order() == 3, "order of xi*eta")
check(c.is_central() and c.order() == 3, "central commutator of order n")
check(xi ** 3 == hq.Element.identity(3), "xi has order 3")

# realization and pullbacks
g = hq.Element(5, c=2, a=1, b=3)
check(g.realize().decompose(5) == g, "realize/decompose round trip")
m_xi = hq.Map.xi(3)
m_eta = hq.Map.eta(3)
cubic = hq.Laurent.parse("x0^3 + x1^3 + x2^3", dim=3)
product = hq.Laurent.parse("x0*x1*x2", dim=3)
check(m_xi.pullback(cubic) == cubic, "xi fixes the Fermat cubic")
check(m_eta.pullback(cubic) == cubic, "eta fixes the Fermat cubic")
check(m_xi.pullback(product) == product, "xi fixes the coordinate product")
check((m_xi @ m_eta).decompose(3).exponents() == (0, 1, 1), "composition tracks the group")

f1 = hq.semi_invariant(3, 1)
check(f1.character(3) == (1, 0), "character of f_1")
check(hq.semi_invariant(3, 3).character(3) == (0, 0), "f_3 is invariant")
check(len(f1) == 3 and f1.homogeneous_degree() == 3, "shape of f_1")

scaled = hq.Laurent.parse("w*x0*x1^-1", dim=2, n=3)
check(scaled.dim == 2, "parse with ambient root")
try:
    hq.Laurent.parse("x0 +", dim=2)
    check(False, "parse error must raise")
except ValueError:
    check(True, "parse error raises ValueError")
try:
    m_xi.pullback(hq.Laurent.one(2))
    check(False, "dimension mismatch must raise")
except ValueError:
    check(True, "dimension mismatch raises ValueError")

# Molien series against brute force
dims = hq.molien_dimensions(3, 9)
check(dims == [1, 0, 0, 2, 0, 0, 4, 0, 0, 7], "Molien dimensions at n = 3")
check(hq.invariant_dimension(3, 6) == 4, "brute-force rank agrees in degree 6")

# linear system: basepoint-free at n = 2 and 3, basepoint at n = 4
bpf = hq.basepoint_report(3)
check(all(o["outcome"] == "in_radical" for o in bpf["outcomes"]), "n = 3 is basepoint-free")
check(hq.even_basepoint(3) is None, "no basepoint witness at odd n")
witness = hq.even_basepoint(4)
check(witness == ["1", "0", "z8^1", "0"], "verified basepoint at n = 4")

# rationality certificate and tower
cert = hq.certificate(5)
check(cert["verdict"]["kind"] == "all_verified_or_cited", "certificate verdict at n = 5")
cited = [s["status"]["source"] for s in cert["steps"] if s["status"]["kind"] == "cited"]
check(
    cited == ["chu-kang Thm 4.1", "chu-kang p. 687", "Fischer"],
    "exactly the three cited steps",
)
check(cert["steps"][0]["witness"]["index"] == "5", "y-lattice index witness")
tower = hq.tower(3)
check(tower["invariant_index"] == "3" and tower["eta_exact_order"] == 3, "degree-0 tower")

# n = 3 showcase and orbits
sc = hq.showcase()
check(sc["mismatched_degrees"] == [], "showcase dims match Molien")
orbits = hq.orbit_summary(3)
check(len(orbits["orbits"]) == 4, "four orbits of isolated fixed points")
check(
    all(o["size"] == 3 and o["stabilizer_order"] == 3 for o in orbits["orbits"]),
    "orbit sizes and stabilizers",
)
check(orbits["total_points"] == 12, "twelve isolated fixed points")

print(f"smoke test passed: {checks} checks")
