"""Quick check that the extension module imports and agrees with known values.

Build and install first:

    pip install --no-build-isolation -e crates/python
    python python/smoke_test.py
"""

import json
import math

import divergence as dv


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    unit = dv.Measure.uniform(0.0, 1.0)
    half = dv.Measure.uniform(0.0, 0.5)
    beta = dv.Measure.beta(2, 2)
    fair = dv.Measure.discrete([("a", 0.5), ("b", 0.5)])
    biased = dv.Measure.discrete([("a", 0.25), ("b", 0.75)])

    close(dv.divergence(fair, biased), 0.143841036225890, 1e-12)
    close(dv.divergence(beta, unit, "renyi", 2.0), math.log(1.2), 1e-12)
    close(dv.divergence(beta, unit, "tsallis", 2.0), 0.2, 1e-12)
    assert dv.divergence(dv.Measure.uniform(0.0, 2.0), unit, "renyi", 2.0) == math.inf
    close(dv.entropy(beta), 5.0 / 3.0 - math.log(6.0), 1e-9)
    close(dv.renyi_to_tsallis(math.log(4.0 / 3.0), 2.0), 1.0 / 3.0, 1e-12)
    close(dv.tsallis_to_renyi(1.0, 2.0), math.log(2.0), 1e-12)

    close(beta.mass((0.0, 0.5)), 0.5, 1e-15)
    close(fair.mass(["a"]), 0.5, 0.0)
    again = dv.Measure.from_json(beta.to_json())
    assert again.to_json() == beta.to_json()

    est = dv.supremum_estimate(half, unit, "renyi", 2.0)
    assert est.cells == 2 and est.converged
    close(est.lower_bound, math.log(2.0), 1e-12)

    est = dv.supremum_estimate(beta, unit, "renyi", 2.0)
    values = [row[2] for row in est.trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert est.gap <= 1e-4
    assert est.trace_csv().startswith("step,cells,partition_value,oracle_value,gap\n")

    est = dv.supremum_estimate(dv.Measure.uniform(0.0, 2.0), unit, "renyi", 2.0)
    assert est.lower_bound == math.inf and est.witness == [(1.0, 2.0)]

    levels = dv.quantize(beta, unit, 3)
    close(sum(r for _, r in levels), 1.0, 1e-12)
    assert dv.simple_divergence(beta, unit, 6, 2.0) <= dv.simple_divergence(beta, unit, 7, 2.0)

    report = json.loads(dv.run_suite("transform", 42))
    assert report["seed"] == 42 and all(p["passed"] for p in report["properties"])

    for bad in (lambda: dv.Measure.discrete([("a", 0.4), ("b", 0.5)]),
                lambda: dv.divergence(beta, unit, "renyi", 1.0),
                lambda: dv.divergence(beta, unit, "bogus")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("smoke test ok")


if __name__ == "__main__":
    main()
