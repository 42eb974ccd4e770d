import json
import random
import threading
import urllib.request

import pytest

from conftest import requires_solver
from genlib import gen_prop_formula
from proofkit.pretty import pp_formula
from proofkit.service import ProofkitServer, ServiceError, Workspace
from proofkit.tree import revalidate


@pytest.fixture()
def ws():
    workspace = Workspace()
    yield workspace
    workspace.shutdown()


def rules_in(payload):
    return [entry["rule"] for entry in payload["rules"]]


def test_create_goal_starts_with_one_hole(ws):
    got = ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    assert got["proofId"] == 1
    assert got["proof"]["holes"] == [[]]
    assert got["proof"]["root"]["status"] == "hole"
    assert got["proof"]["goalText"] == "⊢ p ⇒ q ⇒ (p ∧ q)"


def test_automation_mode_filters_buttons(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    ws.handle("setMode", {"mode": "automation"})
    got = ws.handle("listApplicable", {"proofId": 1, "path": []})
    assert set(rules_in(got)) == {"ImpR", "WeakR", "ContrR", "Cut", "Auto", "Z3Axiom"}


def test_learning_mode_lists_every_rule(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p"})
    got = ws.handle("listApplicable", {"proofId": 1, "path": []})
    assert len(rules_in(got)) == 21  # 20 LK rules + Z3, no Auto
    assert "Auto" not in rules_in(got)
    assert "Z3Axiom" in rules_in(got)


def test_hoare_buttons_follow_command(ws):
    ws.handle("createGoal", {"kind": "hoare", "text": "{x = 1} x := x + 1 {x = 2}"})
    ws.handle("setMode", {"mode": "automation"})
    got = ws.handle("listApplicable", {"proofId": 1, "path": []})
    assert rules_in(got) == ["HAssign", "HConseq"]
    needs = {e["rule"]: e["needs"] for e in got["rules"]}
    assert needs["HConseq"] == ["strengthenedPre", "weakenedPost"]


def test_apply_rule_without_principal_pair_is_rule_error(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    with pytest.raises(ServiceError) as e:
        ws.handle("applyRule", {"proofId": 1, "path": [], "rule": "Id", "args": {}})
    assert e.value.code == "rule-error"


def test_apply_and_summary_rendering(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    got = ws.handle("applyRule", {"proofId": 1, "path": [], "rule": "ImpR", "args": {}})
    root = got["proof"]["root"]
    assert root["status"] == "derived" and root["label"] == "⇒R"
    assert root["children"][0]["goal"] == "p ⊢ q ⇒ (p ∧ q)"
    assert got["proof"]["holes"] == [[0]]


def test_parse_preview_op(ws):
    ok = ws.handle("parsePreview", {"kind": "sequent", "text": "|- p"})
    assert ok == {"ok": True, "canonical": "⊢ p"}
    bad = ws.handle("parsePreview", {"kind": "sequent", "text": "p &&"})
    assert bad["ok"] is False and bad["column"] == 5


def test_auto_op_completes_walkthrough(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    got = ws.handle("auto", {"proofId": 1, "path": []})
    assert got["outcome"] == {"status": "completed"}
    assert got["proof"]["complete"] is True


def test_auto_op_reports_ambiguity(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "p => q, p => r, p |- q"})
    got = ws.handle("auto", {"proofId": 1, "path": []})
    assert got["outcome"]["status"] == "stuck"
    assert got["outcome"]["reason"] == "ambiguous"
    assert got["outcome"]["rule"] == "ImpL"
    assert len(got["outcome"]["positions"]) == 2


def test_detach_attach_flow(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => q => (p /\\ q)"})
    ws.handle("auto", {"proofId": 1, "path": []})
    got = ws.handle("detach", {"proofId": 1, "path": [0]})
    new_id = got["detachedProofId"]
    assert got["proof"]["complete"] is False
    assert got["detached"]["complete"] is True
    back = ws.handle("attach", {"proofId": 1, "path": [0], "subProofId": new_id})
    assert back["proof"]["complete"] is True
    with pytest.raises(ServiceError) as e:
        ws.handle("listApplicable", {"proofId": new_id, "path": []})
    assert e.value.code == "not-found"


def test_set_hidden_round_trips_through_save(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => p"})
    ws.handle("auto", {"proofId": 1, "path": []})
    ws.handle("setHidden", {"proofId": 1, "path": [], "hidden": True})
    saved = ws.handle("save", {"proofId": 1})
    assert saved["script"]["hiddenPaths"] == [[]]
    loaded = ws.handle("load", {"script": saved["script"]})
    assert loaded["proof"]["root"]["hidden"] is True


def test_mode_switch_never_alters_trees(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => p"})
    before = ws.handle("listProofs", {})["proofs"]
    ws.handle("setMode", {"mode": "automation"})
    after = ws.handle("listProofs", {})["proofs"]
    assert before == after


def test_delete_proof(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p"})
    ws.handle("deleteProof", {"proofId": 1})
    with pytest.raises(ServiceError) as e:
        ws.handle("exportLatex", {"proofId": 1})
    assert e.value.code == "not-found"


def test_unknown_op_and_bad_arguments(ws):
    with pytest.raises(ServiceError) as e:
        ws.handle("frobnicate", {})
    assert e.value.code == "bad-request"
    with pytest.raises(ServiceError) as e:
        ws.handle("applyRule", {"proofId": 7, "path": [], "rule": "Id", "args": {}})
    assert e.value.code == "not-found"
    ws.handle("createGoal", {"kind": "lk", "text": "|- p"})
    with pytest.raises(ServiceError) as e:
        ws.handle("applyRule", {"proofId": 1, "path": [4], "rule": "Id", "args": {}})
    assert e.value.code == "not-found"
    with pytest.raises(ServiceError) as e:
        ws.handle("createGoal", {"kind": "lk", "text": "p /\\"})
    assert e.value.code == "parse-error"


@requires_solver
def test_z3_ticket_applies_when_done(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "x = 1 |- x + 1 = 2"})
    ticket = ws.handle("z3Check", {"proofId": 1, "path": []})["ticket"]
    import time
    deadline = time.time() + 30
    while time.time() < deadline:
        got = ws.handle("result", {"ticket": ticket})
        if got["status"] == "done":
            break
        time.sleep(0.1)
    assert got["status"] == "done"
    assert got["verdict"] == {"result": "valid"}
    assert got["applied"] is True
    assert got["proof"]["complete"] is True
    assert got["proof"]["root"]["pseudo"] is True


@requires_solver
def test_z3_ticket_goes_stale_if_tree_changed(ws):
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => p"})
    ticket = ws.handle("z3Check", {"proofId": 1, "path": []})["ticket"]
    ws.handle("applyRule", {"proofId": 1, "path": [], "rule": "ImpR", "args": {}})
    import time
    deadline = time.time() + 30
    while time.time() < deadline:
        got = ws.handle("result", {"ticket": ticket})
        if got["status"] == "done":
            break
        time.sleep(0.1)
    assert got["verdict"] == {"result": "valid"}
    assert got["applied"] is False and got["stale"] is True
    # the user's explicit rule application stands
    proofs = ws.handle("listProofs", {})["proofs"]
    assert proofs[0]["root"]["rule"] == "ImpR"


def test_protocol_fuzz_trees_always_revalidate(ws):
    rng = random.Random(121)
    ws.handle("createGoal", {"kind": "lk", "text": "|- p => (q => p)"})
    ws.handle("createGoal", {"kind": "hoare", "text": "{x = 1} x := x + 1 ; skip {x = 2}"})
    for _ in range(300):
        proofs = ws.handle("listProofs", {})["proofs"]
        if not proofs:
            break
        summary = rng.choice(proofs)
        pid = summary["proofId"]
        action = rng.randrange(6)
        try:
            if action == 0 and summary["holes"]:
                path = rng.choice(summary["holes"])
                listing = ws.handle("listApplicable", {"proofId": pid, "path": path})
                entry = rng.choice(listing["rules"])
                args = {}
                if entry["positions"]:
                    args["principal"] = rng.choice(entry["positions"])
                if "freshVar" in entry["needs"]:
                    args["freshVar"] = f"v{rng.randrange(100)}"
                if "witnessTerm" in entry["needs"]:
                    args["witnessTerm"] = "x + 1"
                if "cutFormula" in entry["needs"]:
                    args["cutFormula"] = pp_formula(gen_prop_formula(rng, 1))
                if "midCondition" in entry["needs"]:
                    args["midCondition"] = "x = 1"
                if "strengthenedPre" in entry["needs"]:
                    args["strengthenedPre"] = "x = 1"
                    args["weakenedPost"] = "x = 2"
                if entry["rule"] in ("Auto", "Z3Axiom"):
                    continue
                ws.handle("applyRule", {"proofId": pid, "path": path,
                                        "rule": entry["rule"], "args": args})
            elif action == 1:
                node = _random_node(rng, summary["root"])
                ws.handle("prune", {"proofId": pid, "path": node["path"]})
            elif action == 2:
                node = _random_node(rng, summary["root"])
                got = ws.handle("detach", {"proofId": pid, "path": node["path"]})
            elif action == 3 and summary["holes"]:
                others = [p["proofId"] for p in proofs if p["proofId"] != pid]
                if others:
                    ws.handle("attach", {"proofId": pid,
                                         "path": rng.choice(summary["holes"]),
                                         "subProofId": rng.choice(others)})
            elif action == 4:
                node = _random_node(rng, summary["root"])
                ws.handle("setHidden", {"proofId": pid, "path": node["path"],
                                        "hidden": rng.random() < 0.5})
            elif action == 5 and summary["holes"]:
                ws.handle("auto", {"proofId": pid,
                                   "path": rng.choice(summary["holes"])})
        except ServiceError:
            pass  # invalid random moves are fine; trees must stay valid
        for pid2, proof in ws.proofs.items():
            revalidate(proof)


def _random_node(rng, node):
    options = []

    def collect(n):
        options.append(n)
        for child in n["children"]:
            collect(child)

    collect(node)
    return rng.choice(options)


# ---- one end-to-end HTTP smoke test ------------------------------------------

def test_http_layer_roundtrip():
    workspace = Workspace()
    server = ProofkitServer(("127.0.0.1", 0), workspace)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        def post(op, body):
            req = urllib.request.Request(
                f"http://127.0.0.1:{port}/api/{op}",
                data=json.dumps(body).encode(), method="POST",
                headers={"Content-Type": "application/json"})
            with urllib.request.urlopen(req, timeout=10) as resp:
                assert resp.headers["Access-Control-Allow-Origin"] == "*"
                return json.loads(resp.read().decode())

        created = post("createGoal", {"kind": "lk", "text": "|- p => p"})
        assert created["ok"] is True and created["payload"]["proofId"] == 1
        done = post("auto", {"proofId": 1, "path": []})
        assert done["payload"]["outcome"] == {"status": "completed"}
        latex = post("exportLatex", {"proofId": 1})
        assert "\\begin{prooftree}" in latex["payload"]["latex"]
        failed = post("applyRule", {"proofId": 1, "path": [], "rule": "Id", "args": {}})
        assert failed["ok"] is False and failed["error"]["code"] == "not-a-hole"
    finally:
        server.shutdown()
        server.server_close()
        workspace.shutdown()
