from thuekit.services.cross_section import CrossSectionService
from thuekit.services.systems import builtin_system


async def test_root(client):
    response = await client.get("/")
    assert response.status_code == 200
    assert response.json()["message"] == "ThueKit API Started"


async def test_normal_form(client):
    response = await client.post("/api/v1/rewriting/normal-form", json={"system": "S", "word": "bbc"})
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == 1
    assert body["normal_form"] == "a^3 c a^2"
    assert body["steps"] == 3
    assert body["derivation"]["start"] == "b^2 c"


async def test_unknown_system(client):
    response = await client.post("/api/v1/rewriting/normal-form", json={"system": "Q", "word": "a"})
    assert response.status_code == 400


async def test_step_budget_conflict(client):
    response = await client.post(
        "/api/v1/rewriting/normal-form", json={"system": "S", "word": "bbc", "max_steps": 1}
    )
    assert response.status_code == 409


async def test_redexes_unknown_symbol(client):
    response = await client.post("/api/v1/rewriting/redexes", json={"system": "S", "word": "xyz"})
    assert response.status_code == 400


async def test_redexes(client):
    response = await client.post("/api/v1/rewriting/redexes", json={"system": "S", "word": "bbc"})
    assert response.status_code == 200
    assert len(response.json()["redexes"]) == 1


async def test_critical_pairs_of_u_resolve(client):
    response = await client.post("/api/v1/confluence/critical-pairs", json={"system": "U", "max_param": 2})
    assert response.status_code == 200
    lines = response.json()
    assert lines
    assert all(line["resolved"] for line in lines)


async def test_dehn_distance(client):
    response = await client.post("/api/v1/dehn/distance", json={"u": "acc", "v": "0"})
    assert response.status_code == 200
    body = response.json()
    assert body["distance"] == 1
    assert body["status"] == "exact"


async def test_f(client):
    response = await client.get("/api/v1/paper/f", params=[("values", 1), ("values", 1)])
    assert response.status_code == 200
    assert response.json()["value"] == 9


async def test_f_negative_value(client):
    response = await client.get("/api/v1/paper/f", params={"values": -1})
    assert response.status_code == 422


async def test_verify_lemma(client):
    response = await client.get("/api/v1/paper/verify/f", params={"seed": 0})
    assert response.status_code == 200
    assert response.json()["passed"] is True


async def test_verify_unknown_lemma(client):
    response = await client.get("/api/v1/paper/verify/nope")
    assert response.status_code == 422


async def test_cross_section_refuted(client):
    dfa = CrossSectionService.dump_dfa(CrossSectionService.irreducibles_dfa(builtin_system("R")))
    response = await client.post("/api/v1/cross-section/check", json={"dfa": dfa, "horizon": 6})
    assert response.status_code == 200
    assert response.json()["verdict"] == "refuted"


async def test_cross_section_bad_dfa(client):
    response = await client.post("/api/v1/cross-section/check", json={"dfa": "0 a 0\n"})
    assert response.status_code == 400
