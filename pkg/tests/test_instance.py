import math

import numpy as np
import pytest

from sbrp.instance import (
    Instance,
    InstanceError,
    Station,
    apply_alpha,
    build_cost_matrix,
    bundled_path,
    load_instance,
    parse_instance,
    parse_legacy,
    serialize_instance,
    validate,
)

CANONICAL_1 = """\
1 10
0 0 0 0
1 3 4 0
"""


def test_parse_single_station_345_triangle():
    inst = parse_instance(CANONICAL_1)
    assert inst.n == 1
    assert inst.vehicle_capacity == 10
    assert inst.cost[0][1] == 5


def test_parse_rejects_nonzero_demand_sum():
    doc = "2 10\n0 0 0 0\n1 1 1 1\n2 2 2 1\n"
    with pytest.raises(InstanceError, match="demand sum nonzero"):
        parse_instance(doc)


def test_parse_rejects_depot_demand():
    doc = "1 10\n0 0 0 3\n1 1 1 -3\n"
    with pytest.raises(InstanceError, match="line 2"):
        parse_instance(doc)


def test_parse_rejects_out_of_order_and_duplicate_ids():
    with pytest.raises(InstanceError, match="in order"):
        parse_instance("2 10\n0 0 0 0\n2 1 1 1\n1 2 2 -1\n")
    with pytest.raises(InstanceError, match="duplicate"):
        parse_instance("2 10\n0 0 0 0\n1 1 1 1\n1 2 2 -1\n")


def test_parse_reports_malformed_line_number():
    with pytest.raises(InstanceError, match="line 3"):
        parse_instance("1 10\n0 0 0 0\n1 x 4 0\n")


def test_bundled_n20q10D_loads():
    inst = load_instance(bundled_path("n20q10D.txt"), alpha=1)
    assert inst.n == 20
    assert inst.vehicle_capacity == 10
    assert validate(inst) == []


@pytest.mark.parametrize("d,alpha,expected", [
    (-10, 1, (10, 0, 20)),
    (10, 3, (30, 60, 60)),
    (0, 1, (10, 10, 20)),
])
def test_apply_alpha_values(d, alpha, expected):
    triples = apply_alpha([0, d], alpha)
    assert triples[0] == (0, 0, 0)
    assert triples[1] == expected


def test_apply_alpha_rejects_out_of_range():
    with pytest.raises(ValueError, match="outside"):
        apply_alpha([0, 11], 1)


def test_apply_alpha_homogeneous():
    base = apply_alpha([0, -4, 7, 0], 2)
    scaled = apply_alpha([0, -4, 7, 0], 6)
    for b, s in zip(base, scaled):
        assert tuple(3 * x for x in b) == s


def test_cost_matrix_small_values():
    c = build_cost_matrix([(0, 0), (3, 4), (1, 1)])
    assert c[0][1] == 5
    assert c[0][2] == 1  # floor(sqrt(2))


def test_cost_matrix_matches_integer_sqrt_oracle(rng):
    pts = [tuple(int(v) for v in rng.integers(-200, 200, size=2)) for _ in range(10)]
    c = build_cost_matrix(pts)
    for i, (xi, yi) in enumerate(pts):
        for j, (xj, yj) in enumerate(pts):
            expected = math.isqrt((xi - xj) ** 2 + (yi - yj) ** 2)
            assert c[i][j] == expected
    assert (c == c.T).all()
    assert (np.diag(c) == 0).all()


def test_cost_matrix_decimal_coordinates_exact():
    # 2.5^2 + 6^2 = 42.25 -> floor 6; boundary case must not drift with floats
    c = build_cost_matrix([("0", "0"), ("2.5", "6")])
    assert c[0][1] == 6


def test_validate_reports_all_violations():
    stations = (
        Station(0, 0, 0, 0, 0, 0, 0),
        Station(1, 1, 1, 5, 2, 7, 6),   # target 7 > capacity 6
        Station(2, 2, 2, -8, 8, 0, 7),  # |d| > capacity
    )
    cost = build_cost_matrix([(0, 0), (1, 1), (2, 2)])
    inst = Instance("bad", 2, 10, stations, cost)
    problems = validate(inst)
    assert any("target exceeds capacity" in p for p in problems)
    assert any("demand exceeds station capacity" in p for p in problems)
    assert any("demand sum nonzero" in p for p in problems)


def test_parse_serialize_round_trip():
    text = bundled_path("n20q10D.txt").read_text()
    inst = parse_instance(text, alpha=1, name="n20q10D")
    again = parse_instance(serialize_instance(inst), alpha=1, name="n20q10D")
    assert again == inst


def test_legacy_loader_variants():
    body = "0 0 0 0\n1 3 4 -2\n2 6 8 2\n"
    via_header = parse_legacy("3 12\n" + body)
    via_lines = parse_legacy("3\n12\n" + body)
    no_ids = parse_legacy("3 12\n0 0 0\n3 4 -2\n6 8 2\n")
    assert via_header == via_lines == no_ids
    assert via_header.vehicle_capacity == 12
    assert via_header.stations[1].demand == -2
