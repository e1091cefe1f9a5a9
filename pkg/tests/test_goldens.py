import json

from polyrigid.goldens import diff, load_fixture, regenerate, token


def test_fixture_shape():
    fx = load_fixture()
    assert (fx["N"], fx["n_t"], fx["rho_prime"], fx["columns"]) == (3, 3, 1, 80)
    for table in ("input_data", "phi_columns"):
        assert sorted(fx[table]) == ["1", "2", "3"]
        assert all(len(row) == 80 for row in fx[table].values())


def test_regenerated_tables_match_fixture():
    fx = load_fixture()
    assert diff(fx, regenerate(3, 3, 1, 80)) == []


def test_diff_reports_mismatch(tmp_path):
    fx = load_fixture()
    fx["input_data"]["2"][8] = "c0"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(fx))
    problems = diff(load_fixture(str(path)), regenerate())
    assert problems == [("input_data", "2", 8, "c0", "-3c0")]


def test_tokens():
    assert token(0, 3) == ""
    assert token(1, 0) == "c0"
    assert token(-3, 2) == "-3c2"


def test_other_tower_rows_sum_to_zero():
    # every b row sums to zero symbolically, whatever n and rho' are
    for n, rp in ((2, 1), (3, 2), (4, 1)):
        got = regenerate(3, n, rp)
        for row in got["input_data"].values():
            total = {}
            for tok in row:
                if tok:
                    coef, s = tok.split("c")
                    coef = {"": 1, "-": -1}[coef] if coef in ("", "-") else int(coef)
                    total[s] = total.get(s, 0) + coef
            assert all(v % n == 0 for v in total.values())
