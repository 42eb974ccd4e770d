"""Local session service: a single workspace exposed over JSON-on-HTTP.

All proof logic runs here; responses carry fully rendered tree summaries
(goal texts, statuses, labels, button lists) so a client never computes any.
One mutation is processed at a time behind the workspace lock; solver checks
run in background workers and report through tickets (z3Check/result), taking
the lock again only to apply a Valid verdict to a still-unchanged hole.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional, Union

from . import auto as auto_mod
from . import persist, smt
from .errors import InvalidPath, NotAHole, ProofError, SolverNotFound
from .hoare import HOARE_LABELS, HOARE_NEEDS, HoareRule, applicable_hoare
from .latex import to_latex
from .lk import LK_LABELS, LKRule, RULE_NEEDS, applicable_lk, candidates
from .parser import ParseError, parse_preview
from .pretty import pp_goal
from .syntax import HoareGoal, LKGoal, alpha_eq_goal
from .tree import (NodePath, ProofTree, apply_at, attach_at, close_z3_at, detach_at, holes, hole,
                   is_complete, is_hole, node_at, prune_at, revalidate, set_hidden)

DEFAULT_PORT = 7171


class ServiceError(Exception):
    def __init__(self, code: str, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}


def _wrap_kernel_error(e: Exception) -> ServiceError:
    if isinstance(e, ParseError):
        return ServiceError("parse-error", e.message,
                            {"line": e.line, "column": e.column})
    if isinstance(e, NotAHole):
        return ServiceError("not-a-hole", str(e))
    if isinstance(e, InvalidPath):
        return ServiceError("not-found", str(e))
    if isinstance(e, SolverNotFound):
        return ServiceError("solver-error", str(e), {"kernelCode": e.code})
    if isinstance(e, ProofError):
        return ServiceError("rule-error", str(e), {"kernelCode": e.code})
    raise e


@dataclass
class _Ticket:
    proof_id: int
    path: NodePath
    goal: LKGoal
    future: Future
    applied: bool = False
    stale: bool = False


class Workspace:
    """One user's active proofs plus the learning/automation mode flag."""

    def __init__(self, solver: Union[str, list[str], None] = None,
                 solver_timeout: float = smt.DEFAULT_TIMEOUT):
        self.proofs: dict[int, ProofTree] = {}
        self.mode = "learning"
        self.solver = solver
        self.solver_timeout = solver_timeout
        self._next_proof_id = 1
        self._next_ticket_id = 1
        self._tickets: dict[int, _Ticket] = {}
        self._lock = threading.RLock()
        self._pool = ThreadPoolExecutor(max_workers=4, thread_name_prefix="solver")

    # -- protocol entry point -------------------------------------------------

    def handle(self, op: str, params: dict) -> dict:
        method = getattr(self, "op_" + op, None)
        if method is None:
            raise ServiceError("bad-request", f"unknown operation {op!r}")
        if not isinstance(params, dict):
            raise ServiceError("bad-request", "request body must be a JSON object")
        try:
            return method(params)
        except ServiceError:
            raise
        except (ProofError, ParseError) as e:
            raise _wrap_kernel_error(e) from e

    # -- helpers ---------------------------------------------------------------

    def _proof(self, params: dict) -> tuple[int, ProofTree]:
        pid = params.get("proofId")
        if not isinstance(pid, int):
            raise ServiceError("bad-request", "proofId must be an integer")
        proof = self.proofs.get(pid)
        if proof is None:
            raise ServiceError("not-found", f"no proof with id {pid}")
        return pid, proof

    def _path(self, params: dict, key: str = "path") -> NodePath:
        raw = params.get(key, [])
        if not (isinstance(raw, list) and all(isinstance(i, int) and i >= 0 for i in raw)):
            raise ServiceError("bad-request", f"{key} must be a list of non-negative integers")
        return tuple(raw)

    def _store(self, pid: int, proof: ProofTree) -> dict:
        revalidate(proof)
        self.proofs[pid] = proof
        return {"proof": self._summary(pid, proof)}

    def _summary(self, pid: int, proof: ProofTree) -> dict:
        def render(node: ProofTree, path: NodePath) -> dict:
            if node.step is None:
                status, rule, label = "hole", None, None
                children = []
            else:
                rule = node.step.rule.value
                label = {**LK_LABELS, **HOARE_LABELS}[node.step.rule]
                status = "closed" if not node.step.children else "derived"
                children = [render(c, path + (i,))
                            for i, c in enumerate(node.step.children)]
            return {
                "id": node.node_id,
                "path": list(path),
                "goal": pp_goal(node.goal),
                "kind": "lk" if isinstance(node.goal, LKGoal) else "hoare",
                "status": status,
                "rule": rule,
                "label": label,
                "pseudo": node.step is not None and node.step.rule is LKRule.Z3Axiom,
                "hidden": node.hidden,
                "children": children,
            }

        return {
            "proofId": pid,
            "kind": "lk" if isinstance(proof.goal, LKGoal) else "hoare",
            "goalText": pp_goal(proof.goal),
            "complete": is_complete(proof),
            "holes": [list(p) for p, _ in holes(proof)],
            "root": render(proof, ()),
        }

    # -- operations -------------------------------------------------------------

    def op_createGoal(self, params: dict) -> dict:
        kind = params.get("kind", "sequent")
        if kind in ("sequent", "lk"):
            kind = "sequent"
        elif kind in ("triple", "hoare"):
            kind = "triple"
        else:
            raise ServiceError("bad-request", f"unknown goal kind {params.get('kind')!r}")
        text = params.get("text")
        if not isinstance(text, str):
            raise ServiceError("bad-request", "text must be a string")
        outcome = parse_preview(text, kind)
        if not outcome.ok:
            raise ServiceError("parse-error", outcome.error,
                               {"line": outcome.line, "column": outcome.column})
        goal = LKGoal(outcome.ast) if kind == "sequent" else HoareGoal(outcome.ast)
        with self._lock:
            pid = self._next_proof_id
            self._next_proof_id += 1
            payload = self._store(pid, hole(goal))
        return {"proofId": pid, **payload}

    def op_parsePreview(self, params: dict) -> dict:
        kind = params.get("kind")
        if kind not in ("sequent", "triple", "formula", "term"):
            raise ServiceError("bad-request", f"unknown parse kind {kind!r}")
        text = params.get("text")
        if not isinstance(text, str):
            raise ServiceError("bad-request", "text must be a string")
        outcome = parse_preview(text, kind)
        if outcome.ok:
            return {"ok": True, "canonical": outcome.canonical}
        return {"ok": False, "error": outcome.error,
                "line": outcome.line, "column": outcome.column}

    def op_listApplicable(self, params: dict) -> dict:
        with self._lock:
            _, proof = self._proof(params)
            path = self._path(params)
            node = node_at(proof, path)
            if not is_hole(node):
                raise ServiceError("not-a-hole", "rules apply at open goals only")
            entries = []
            if isinstance(node.goal, LKGoal):
                sequent = node.goal.sequent
                if self.mode == "learning":
                    rules = [(rule, candidates(sequent, rule)) for rule in LKRule]
                else:
                    rules = applicable_lk(sequent)
                for rule, positions in rules:
                    if rule is LKRule.Z3Axiom:
                        continue  # appended as a distinct entry below
                    entries.append(self._rule_entry(rule, positions))
                if self.mode == "automation":
                    entries.append({"rule": "Auto", "label": "Auto",
                                    "positions": [], "needs": []})
                entries.append({"rule": "Z3Axiom", "label": "Z3",
                                "positions": [], "needs": []})
            else:
                rules = list(HoareRule) if self.mode == "learning" \
                    else applicable_hoare(node.goal.triple)
                for rule in rules:
                    entries.append({"rule": rule.value, "label": HOARE_LABELS[rule],
                                    "positions": [],
                                    "needs": list(HOARE_NEEDS.get(rule, ()))})
            return {"mode": self.mode, "rules": entries}

    def _rule_entry(self, rule: LKRule, positions) -> dict:
        needs = list(RULE_NEEDS.get(rule, ()))
        if len(positions) > 1:
            needs.append("principalIndex")
        return {"rule": rule.value, "label": LK_LABELS[rule],
                "positions": [{"side": s, "index": i} for s, i in positions],
                "needs": needs}

    def op_applyRule(self, params: dict) -> dict:
        rule_name = params.get("rule")
        if not isinstance(rule_name, str):
            raise ServiceError("bad-request", "rule must be a string")
        if rule_name == "Z3Axiom":
            raise ServiceError("bad-request",
                               "Z3Axiom is discharged asynchronously: use z3Check")
        rule = persist._LK_NAMES.get(rule_name) or persist._HOARE_NAMES.get(rule_name)
        if rule is None:
            raise ServiceError("bad-request", f"unknown rule {rule_name!r}")
        raw_args = params.get("args", {})
        try:
            args = persist._parse_args(rule_name, raw_args)
        except ProofError as e:
            raise ServiceError("bad-request", str(e)) from e
        with self._lock:
            pid, proof = self._proof(params)
            path = self._path(params)
            return self._store(pid, apply_at(proof, path, rule, args))

    def op_prune(self, params: dict) -> dict:
        with self._lock:
            pid, proof = self._proof(params)
            return self._store(pid, prune_at(proof, self._path(params)))

    def op_detach(self, params: dict) -> dict:
        with self._lock:
            pid, proof = self._proof(params)
            remainder, detached = detach_at(proof, self._path(params))
            new_pid = self._next_proof_id
            self._next_proof_id += 1
            payload = self._store(pid, remainder)
            detached_payload = self._store(new_pid, detached)
            return {**payload, "detachedProofId": new_pid,
                    "detached": detached_payload["proof"]}

    def op_attach(self, params: dict) -> dict:
        sub_id = params.get("subProofId")
        if not isinstance(sub_id, int):
            raise ServiceError("bad-request", "subProofId must be an integer")
        with self._lock:
            pid, proof = self._proof(params)
            sub = self.proofs.get(sub_id)
            if sub is None:
                raise ServiceError("not-found", f"no proof with id {sub_id}")
            if sub_id == pid:
                raise ServiceError("bad-request", "cannot attach a proof onto itself")
            combined = attach_at(proof, self._path(params), sub)
            payload = self._store(pid, combined)
            del self.proofs[sub_id]
            self._drop_tickets(sub_id)
            return payload

    def op_setHidden(self, params: dict) -> dict:
        flag = params.get("hidden")
        if not isinstance(flag, bool):
            raise ServiceError("bad-request", "hidden must be a boolean")
        with self._lock:
            pid, proof = self._proof(params)
            return self._store(pid, set_hidden(proof, self._path(params), flag))

    def op_auto(self, params: dict) -> dict:
        max_depth = params.get("maxDepth", auto_mod.DEFAULT_MAX_DEPTH)
        if not isinstance(max_depth, int) or max_depth <= 0:
            raise ServiceError("bad-request", "maxDepth must be a positive integer")
        with self._lock:
            pid, proof = self._proof(params)
            result = auto_mod.auto_at(proof, self._path(params), max_depth)
            payload = self._store(pid, result.tree)
            return {**payload, "outcome": _outcome_json(result.outcome)}

    def op_z3Check(self, params: dict) -> dict:
        timeout = params.get("timeout", self.solver_timeout)
        if not isinstance(timeout, (int, float)) or timeout <= 0:
            raise ServiceError("bad-request", "timeout must be a positive number")
        with self._lock:
            pid, proof = self._proof(params)
            path = self._path(params)
            node = node_at(proof, path)
            if not is_hole(node):
                raise ServiceError("not-a-hole", "the goal is already closed")
            if not isinstance(node.goal, LKGoal):
                raise ServiceError("rule-error",
                                   "the solver pseudo-axiom applies to sequent goals only",
                                   {"kernelCode": "not-lk-goal"})
            ticket_id = self._next_ticket_id
            self._next_ticket_id += 1
            future = self._pool.submit(smt.check_validity, node.goal.sequent,
                                       float(timeout), self.solver)
            self._tickets[ticket_id] = _Ticket(pid, path, node.goal, future)
            return {"ticket": ticket_id}

    def op_result(self, params: dict) -> dict:
        ticket_id = params.get("ticket")
        if not isinstance(ticket_id, int):
            raise ServiceError("bad-request", "ticket must be an integer")
        ticket = self._tickets.get(ticket_id)
        if ticket is None:
            raise ServiceError("not-found", f"no ticket {ticket_id}")
        if not ticket.future.done():
            return {"status": "pending"}
        try:
            verdict = ticket.future.result()
        except SolverNotFound as e:
            return {"status": "done", "verdict": {"result": "unknown",
                                                  "reason": "solver-error",
                                                  "detail": str(e)},
                    "applied": False, "stale": False}
        payload: dict = {"status": "done", "verdict": _verdict_json(verdict)}
        with self._lock:
            if isinstance(verdict, smt.Valid) and not ticket.applied and not ticket.stale:
                proof = self.proofs.get(ticket.proof_id)
                node = None
                if proof is not None:
                    try:
                        node = node_at(proof, ticket.path)
                    except InvalidPath:
                        node = None
                if (node is not None and is_hole(node)
                        and alpha_eq_goal(node.goal, ticket.goal)):
                    payload.update(self._store(ticket.proof_id,
                                               close_z3_at(proof, ticket.path)))
                    ticket.applied = True
                else:
                    ticket.stale = True
            payload["applied"] = ticket.applied
            payload["stale"] = ticket.stale
        return payload

    def op_exportLatex(self, params: dict) -> dict:
        with self._lock:
            _, proof = self._proof(params)
            return {"latex": to_latex(proof)}

    def op_save(self, params: dict) -> dict:
        with self._lock:
            _, proof = self._proof(params)
            doc = json.loads(persist.serialize(persist.save_proof(proof)).decode("utf-8"))
            return {"script": doc, "extension": persist.FILE_EXTENSION}

    def op_load(self, params: dict) -> dict:
        if "script" in params:
            data = json.dumps(params["script"])
        elif isinstance(params.get("text"), str):
            data = params["text"]
        else:
            raise ServiceError("bad-request", "load needs a script object or text")
        recheck = bool(params.get("recheckZ3", False))
        proof = persist.load_proof(data, recheck_z3=recheck,
                                   solver=self.solver, timeout=self.solver_timeout)
        with self._lock:
            pid = self._next_proof_id
            self._next_proof_id += 1
            payload = self._store(pid, proof)
        return {"proofId": pid, **payload}

    def op_setMode(self, params: dict) -> dict:
        mode = params.get("mode")
        if mode not in ("learning", "automation"):
            raise ServiceError("bad-request", "mode must be 'learning' or 'automation'")
        with self._lock:
            self.mode = mode
        return {"mode": mode}

    def op_deleteProof(self, params: dict) -> dict:
        with self._lock:
            pid, _ = self._proof(params)
            del self.proofs[pid]
            self._drop_tickets(pid)
        return {"deleted": pid}

    def op_listProofs(self, params: dict) -> dict:
        with self._lock:
            return {"mode": self.mode,
                    "proofs": [self._summary(pid, proof)
                               for pid, proof in sorted(self.proofs.items())]}

    def _drop_tickets(self, pid: int):
        for ticket in self._tickets.values():
            if ticket.proof_id == pid:
                ticket.stale = True
                ticket.future.cancel()

    def shutdown(self):
        self._pool.shutdown(wait=False, cancel_futures=True)


def _outcome_json(outcome) -> dict:
    if isinstance(outcome, auto_mod.Completed):
        return {"status": "completed"}
    reason = outcome.reason
    if isinstance(reason, auto_mod.Ambiguous):
        return {"status": "stuck", "reason": "ambiguous",
                "rule": reason.rule.value,
                "positions": [{"side": s, "index": i} for s, i in reason.positions]}
    if isinstance(reason, auto_mod.NoRule):
        return {"status": "stuck", "reason": "no-rule"}
    return {"status": "stuck", "reason": "depth-limit"}


def _verdict_json(verdict: smt.SmtVerdict) -> dict:
    if isinstance(verdict, smt.Valid):
        return {"result": "valid"}
    if isinstance(verdict, smt.Invalid):
        model = verdict.model
        return {"result": "invalid",
                "model": {
                    "bools": dict(sorted(model.bool_atoms.items())),
                    "ints": dict(sorted(model.int_vars.items())),
                    "functions": {
                        name: {"entries": [{"args": list(a), "value": v}
                                           for a, v in interp.entries],
                               "default": interp.default}
                        for name, interp in sorted(model.functions.items())},
                    "text": model.describe(),
                }}
    return {"result": "unknown", "reason": verdict.reason, "detail": verdict.detail}


# --- HTTP layer -----------------------------------------------------------------

class ProofkitServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], workspace: Workspace,
                 static_dir: Optional[Path] = None):
        self.workspace = workspace
        self.static_dir = static_dir
        super().__init__(address, _Handler)


_CONTENT_TYPES = {".html": "text/html", ".js": "text/javascript", ".mjs": "text/javascript",
                  ".css": "text/css", ".json": "application/json", ".svg": "image/svg+xml",
                  ".map": "application/json"}


class _Handler(BaseHTTPRequestHandler):
    server: ProofkitServer
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, doc: dict):
        body = json.dumps(doc, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_POST(self):
        if not self.path.startswith("/api/"):
            self._send_json(404, {"ok": False, "error": {
                "code": "bad-request", "message": "operations live under /api/",
                "details": {}}})
            return
        op = self.path[len("/api/"):]
        try:
            length = int(self.headers.get("Content-Length", "0"))
            params = json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError):
            self._send_json(400, {"ok": False, "error": {
                "code": "bad-request", "message": "request body must be JSON",
                "details": {}}})
            return
        try:
            payload = self.server.workspace.handle(op, params)
        except ServiceError as e:
            self._send_json(200, {"ok": False, "error": {
                "code": e.code, "message": e.message, "details": e.details}})
            return
        except Exception as e:  # never let the service die on a request
            self._send_json(200, {"ok": False, "error": {
                "code": "bad-request", "message": f"internal error: {e}", "details": {}}})
            return
        self._send_json(200, {"ok": True, "payload": payload})

    def do_GET(self):
        if self.path.startswith("/api/"):
            self._send_json(405, {"ok": False, "error": {
                "code": "bad-request", "message": "use POST for operations",
                "details": {}}})
            return
        static = self.server.static_dir
        if static is None:
            self._send_json(404, {"ok": False, "error": {
                "code": "not-found", "message": "no static directory configured",
                "details": {}}})
            return
        rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
        target = (static / rel).resolve()
        if not str(target).startswith(str(static.resolve())) or not target.is_file():
            self.send_response(404)
            self.send_header("Content-Length", "0")
            self.end_headers()
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type",
                         _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)


def serve(port: int = DEFAULT_PORT, solver: Union[str, list[str], None] = None,
          static_dir: Optional[str] = None,
          solver_timeout: float = smt.DEFAULT_TIMEOUT) -> None:
    workspace = Workspace(solver=solver, solver_timeout=solver_timeout)
    static = Path(static_dir).resolve() if static_dir else None
    server = ProofkitServer(("127.0.0.1", port), workspace, static)
    print(f"proofkit service on http://127.0.0.1:{port}/ "
          f"(mode: {workspace.mode}, Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        workspace.shutdown()
        server.server_close()
