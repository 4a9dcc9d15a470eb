"""HTTP facade: stateless endpoints and interactive sessions."""

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from factlog.conllu import serialize_corpus, serialize_graph
from factlog.graph import ParseAlternatives
from factlog.service import ServiceConfig, create_app
from domain_commerce import PARSES, PROTESTS_BAD, PROTESTS_GOOD
from domain_travel import travel_resources

FIXDIR = Path(__file__).parent / "fixtures" / "commerce"


def _conllu_of(*texts):
    blocks = []
    for text in texts:
        blocks.append(serialize_graph(PARSES[text], text))
    return "\n".join(blocks)


@pytest.fixture(scope="module")
def commerce_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("commerce")
    parses_dir = root / "parses"
    parses_dir.mkdir()
    corpus = [
        ParseAlternatives(p.sentence_id, t, (p,)) for t, p in PARSES.items()
    ]
    corpus.append(
        ParseAlternatives(16, PROTESTS_BAD.text, (PROTESTS_BAD,))
    )
    corpus.append(
        ParseAlternatives(17, PROTESTS_GOOD.text, (PROTESTS_GOOD,))
    )
    (parses_dir / "commerce.conllu").write_text(serialize_corpus(corpus))
    return {
        "frames": str(FIXDIR / "frames.fl"),
        "training": str(FIXDIR / "training.fl"),
        "graph": str(FIXDIR / "graph.lex"),
        "embeddings": str(FIXDIR / "embeddings.vec"),
        "definitions": str(FIXDIR / "definitions.tsv"),
        "parser": str(parses_dir),
    }


@pytest.fixture(scope="module")
def client(commerce_files):
    config = ServiceConfig(
        frames=commerce_files["frames"],
        training=commerce_files["training"],
        parser=commerce_files["parser"],
        graph=commerce_files["graph"],
        scorer="lexical",
    )
    return TestClient(create_app(config))


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_validate_endpoint(client):
    response = client.post(
        "/validate", json={"conllu": _conllu_of("Mary buys a car")}
    )
    body = response.json()
    assert body["accepted"]
    assert body["sentences"][0]["status"] == "accepted"


def test_validate_reports_violations(client):
    block = serialize_graph(PROTESTS_BAD, PROTESTS_BAD.text)
    body = client.post("/validate", json={"conllu": block}).json()
    assert not body["accepted"]
    rendered = body["sentences"][0]["violations"][0]["rendered"]
    assert rendered.startswith("P1:")


def test_wordfacts_endpoint(client):
    body = client.post(
        "/wordfacts", json={"conllu": _conllu_of("Mary buys a car")}
    ).json()
    assert "word(index(1,1,1),mary," in body["records"]


def test_normalize_endpoint(client):
    body = client.post(
        "/normalize", json={"conllu": _conllu_of("A car is bought by Mary")}
    ).json()
    assert "# provenance = passive" in body["conllu"]


def test_learn_endpoint(client):
    training = (FIXDIR / "training.fl").read_text()
    conllu = _conllu_of(
        "Mary buys a car for Bob",
        "Mary buys a car for 5,000 dollars",
        "Mary makes a purchase of a car for Bob",
        "Mary sold a car",
        "A car is made in the country",
        "Mary gives a book to Bob",
    )
    body = client.post(
        "/learn", json={"training": training, "conllu": conllu}
    ).json()
    assert body["learned"] == 6
    assert (
        'lvp(buy,"Commerce_buy",[pattern("Buyer","verb->subject",required),'
        'pattern("Goods","verb->object",required),'
        'pattern("Recipient","verb->pp[for]->dep",optnl)]).' in body["lvp"]
    )


def test_parse_endpoint_produces_ulr(client):
    body = client.post(
        "/parse", json={"sentences": ["Mary bought a car for John"]}
    ).json()
    assert 'role("Buyer","Mary","bn:00046516n")' in body["ulr"]
    assert "person(" in body["ulr"]  # domain atoms emitted


def test_parse_rejects_non_factual(client):
    from domain_commerce import GO_FETCH

    block = serialize_graph(GO_FETCH, GO_FETCH.text)
    response = client.post(
        "/parse",
        json={"sentences": ["Go fetch more water"], "conllu": block},
    )
    assert response.status_code == 422
    assert "rephrase" in response.json()["detail"]


def test_reason_endpoint_brave_and_cautious(client):
    kb = (
        'ulr("Undergoing",[role("Patient","Mary"),role("Therapy",mental)]) v '
        'ulr("Undergoing",[role("Patient","Bob"),role("Therapy",mental)]).'
    )
    queries = 'ulr("Undergoing",[role("Patient",Who),role("Therapy",Therapy)])?'
    brave = client.post(
        "/reason", json={"kb": kb, "queries": queries, "mode": "brave"}
    ).json()
    assert brave["models"] == 2
    assert len(brave["answers"][0]["bindings"]) == 2
    cautious = client.post(
        "/reason", json={"kb": kb, "queries": queries, "mode": "cautious"}
    ).json()
    assert cautious["answers"][0]["bindings"] == []


def test_session_flow():
    app = create_app(ServiceConfig(), resources=travel_resources())
    client = TestClient(app)
    session_id = client.post(
        "/sessions", json={"temporal": True, "mode": "brave"}
    ).json()["session_id"]

    def send(line):
        return client.post(
            f"/sessions/{session_id}/input", json={"line": line}
        ).json()

    for statement in [
        "$person goes to $place initiates $person is located in $place",
        "$person goes to $place terminates $person is located in $place2",
    ]:
        reply = send(statement)
        assert reply["kind"] == "fluent-axiom", reply
    send("Mary goes to the bedroom")
    reply = send("Where is Mary?")
    assert reply["answers"] == [{"What": "bedroom"}]

    kb = client.get(f"/sessions/{session_id}/kb").json()["kb"]
    assert "initiates(" in kb and "happensAt(" in kb

    reply = send(":mode cautious")
    assert "cautious" in reply["message"]

    assert client.delete(f"/sessions/{session_id}").status_code == 200
    assert client.post(
        f"/sessions/{session_id}/input", json={"line": "x?"}
    ).status_code == 404


def test_session_rejects_non_factual_with_rephrase_prompt():
    from domain_commerce import GO_FETCH
    from factlog.correction import FixtureParserProvider
    from factlog.pipeline import Resources
    from parsebuild import alts

    resources = Resources(parser=FixtureParserProvider([alts(GO_FETCH)]))
    app = create_app(ServiceConfig(), resources=resources)
    client = TestClient(app)
    session_id = client.post("/sessions", json={}).json()["session_id"]
    reply = client.post(
        f"/sessions/{session_id}/input", json={"line": "Go fetch more water"}
    ).json()
    assert reply["kind"] == "rejected"
    assert "rephrase" in reply["message"]
