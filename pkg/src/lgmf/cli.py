"""Command-line client for the factorization service.

The CLI never computes anything itself: every subcommand builds a request,
sends it to the service (in-process by default, or a remote instance via
``--server``), and renders the response.  Exit codes: 0 when all
verifications pass, 1 on a verification failure, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=300.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # test-client import warns about its own backend
        from fastapi.testclient import TestClient
    from .service.app import app

    return TestClient(app)


def _load_fan_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SystemExit2(f"cannot read fan file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise SystemExit2(f"fan file {path!r} is not valid JSON: {exc}")


class SystemExit2(Exception):
    """Usage or I/O failure; becomes exit code 2."""


def _fail_for_status(resp) -> None:
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise SystemExit2(f"service error ({resp.status_code}): {detail}")


def _print_report(report: dict) -> bool:
    subject = report.get("subject", "?")
    if report["passed"]:
        print(f"[PASS] {subject}: lambda = {report['lam']}   ({report['wall_time']:.3f}s)")
        return True
    failure = report.get("failure") or {}
    where = ""
    if failure.get("row") is not None:
        where = f" at entry ({failure['row']}, {failure['col']})"
    print(f"[FAIL] {subject}: {failure.get('reason', 'verification failed')}{where}")
    if failure.get("difference"):
        print(f"       difference: {failure['difference']}")
    return False


def _print_matrix(doc: dict, labels: dict) -> None:
    n = doc["n"]
    dim = 1 << n
    entries = {(e["row"], e["col"]): e["poly"] for e in doc["entries"]}
    names = {m: labels.get(str(m), format(m, f"0{n}b")) for m in range(dim)}
    # rows grouped even first, then odd, for readability
    order = sorted(range(dim), key=lambda m: (bin(m).count("1") % 2, m))
    width = max(
        [len(names[m]) for m in order]
        + [len(p) for p in entries.values()]
        + [1]
    )
    header = " " * (width + 2) + "  ".join(names[c].rjust(width) for c in order)
    print(header)
    for r in order:
        cells = [entries.get((r, c), "0").rjust(width) for c in order]
        print(names[r].rjust(width + 2) + "  ".join([""] + cells))


def cmd_potential(client, args) -> int:
    resp = client.post("/potential", json=_load_fan_doc(args.fan))
    _fail_for_status(resp)
    doc = resp.json()
    print(f"n = {doc['n']}, rays = {doc['m']}")
    print(f"W = {doc['potential']}")
    print(f"weights: {', '.join(doc['weights'])}")
    print(f"moment-map form: {doc['moment_map_form']}")
    return 0


def cmd_mf_build(client, args) -> int:
    resp = client.post("/mf/build", json=_load_fan_doc(args.fan))
    _fail_for_status(resp)
    doc = resp.json()
    if args.out == "json":
        print(json.dumps(doc["matrix"], indent=2))
    else:
        _print_matrix(doc["matrix"], doc.get("labels", {}))
    return 0 if _print_report(doc["report"]) else 1


def cmd_mf_verify(client, args) -> int:
    resp = client.post("/mf/verify", json=_load_fan_doc(args.fan))
    _fail_for_status(resp)
    return 0 if _print_report(resp.json()) else 1


def _preset_once(client, name: str) -> dict:
    resp = client.get(f"/mf/preset/{name}")
    _fail_for_status(resp)
    return resp.json()


def cmd_mf_preset(client, args) -> int:
    if args.name == "all":
        names_resp = client.get("/mf/presets")
        _fail_for_status(names_resp)
        names = sorted(names_resp.json())
        workers = max(1, int(os.environ.get("LGMF_THREADS", "1")))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                docs = list(pool.map(lambda n: _preset_once(client, n), names))
        else:
            docs = [_preset_once(client, n) for n in names]
        ok = True
        for doc in sorted(docs, key=lambda d: d["name"]):
            ok = _print_report(doc["report"]) and ok
        return 0 if ok else 1
    doc = _preset_once(client, args.name)
    if args.out == "json":
        print(json.dumps(doc["matrix"], indent=2))
    else:
        _print_matrix(doc["matrix"], doc.get("labels", {}))
    return 0 if _print_report(doc["report"]) else 1


def cmd_crit(client, args) -> int:
    payload = {"fan": _load_fan_doc(args.fan), "t": args.t, "tol": args.tol}
    if args.phases:
        payload["phases"] = args.phases
    resp = client.post("/critical-points", json=payload)
    _fail_for_status(resp)
    print(json.dumps(resp.json(), indent=2))
    return 0


def cmd_generators(client, args) -> int:
    payload = {
        "fan": _load_fan_doc(args.fan),
        "t": args.t,
        "tol": args.tol,
        "seed": args.seed,
    }
    resp = client.post("/generators", json=payload)
    _fail_for_status(resp)
    print(json.dumps(resp.json(), indent=2))
    return 0


def cmd_oracle_telescope(client, args) -> int:
    payload = {"n": args.n, "max_entry": args.max_entry, "seed": args.seed}
    if args.count is not None:
        payload["count"] = args.count
    resp = client.post("/oracle/telescoping", json=payload)
    _fail_for_status(resp)
    doc = resp.json()
    status = "PASS" if doc["all_pass"] else "FAIL"
    print(
        f"[{status}] telescoping ({doc['mode']}): {doc['checked']} rays checked, "
        f"seed = {doc['seed']}"
    )
    for v in doc["failures"]:
        print(f"       counterexample: v = {tuple(v)}")
    return 0 if doc["all_pass"] else 1


def cmd_quantum4(client, args) -> int:
    payload = {"fan": _load_fan_doc(args.fan), "seed": args.seed}
    if args.g is not None:
        payload["g"] = args.g
    resp = client.post("/quantum4", json=payload)
    _fail_for_status(resp)
    doc = resp.json()
    ok = doc["square_ok"] and doc["basis_change_wedge_contraction"] and doc["extracted_matches"]
    if args.g is None:
        print(f"seed = {args.seed}")
    print(f"g = {doc['g']}")
    print(f"corrected square: {'PASS' if doc['square_ok'] else 'FAIL'} (lambda = {doc['lam']})")
    print(
        "basis change: "
        + ("wedge-contraction shape restored" if doc["basis_change_wedge_contraction"] else "FAILED")
        + f", lambda = {doc['lam_after_change']}"
    )
    print(f"round-trip extraction: {'PASS' if doc['extracted_matches'] else 'FAIL'}")
    return 0 if ok else 1


def cmd_fan(client, args) -> int:
    resp = client.get(f"/fans/{args.name}")
    _fail_for_status(resp)
    print(json.dumps(resp.json(), indent=2))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgmf",
        description="Build and verify matrix factorizations of toric potentials.",
    )
    parser.add_argument("--server", default=None, metavar="URL",
                        help="use a running service instead of in-process calls")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="potential of a fan file")
    p.add_argument("fan")

    mf = sub.add_parser("mf", help="matrix factorization commands")
    mf_sub = mf.add_subparsers(dest="mf_command", required=True)
    b = mf_sub.add_parser("build", help="build and verify from a fan file")
    b.add_argument("fan")
    b.add_argument("--out", choices=("json", "pretty"), default="pretty")
    v = mf_sub.add_parser("verify", help="verify the construction for a fan file")
    v.add_argument("fan")
    pr = mf_sub.add_parser("preset", help="named example ('all' runs every one)")
    pr.add_argument("name")
    pr.add_argument("--out", choices=("json", "pretty"), default="pretty")

    c = sub.add_parser("crit", help="critical points of the potential")
    c.add_argument("fan")
    c.add_argument("--t", type=float, default=0.36787944117144233)
    c.add_argument("--tol", type=float, default=1e-12)
    c.add_argument("--phases", type=int, default=None)

    g = sub.add_parser("generators", help="numeric generators at critical points")
    g.add_argument("fan")
    g.add_argument("--t", type=float, default=0.36787944117144233)
    g.add_argument("--tol", type=float, default=1e-12)
    g.add_argument("--seed", type=int, default=0)

    o = sub.add_parser("oracle", help="independent identity checks")
    o_sub = o.add_subparsers(dest="oracle_command", required=True)
    t = o_sub.add_parser("telescope", help="telescoping identity sweep")
    t.add_argument("--n", type=int, default=2)
    t.add_argument("--max-entry", type=int, default=3)
    t.add_argument("--count", type=int, default=None)
    t.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("quantum4", help="dimension-4 correction and basis change")
    q.add_argument("fan")
    q.add_argument("--g", default=None, help="correction term as canonical poly text")
    q.add_argument("--seed", type=int, default=0)

    f = sub.add_parser("fan", help="print a stock fan document")
    f.add_argument("name")

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8736)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    try:
        client = _client(args.server)
        try:
            if args.command == "potential":
                return cmd_potential(client, args)
            if args.command == "mf":
                if args.mf_command == "build":
                    return cmd_mf_build(client, args)
                if args.mf_command == "verify":
                    return cmd_mf_verify(client, args)
                return cmd_mf_preset(client, args)
            if args.command == "crit":
                return cmd_crit(client, args)
            if args.command == "generators":
                return cmd_generators(client, args)
            if args.command == "oracle":
                return cmd_oracle_telescope(client, args)
            if args.command == "quantum4":
                return cmd_quantum4(client, args)
            if args.command == "fan":
                return cmd_fan(client, args)
            raise SystemExit2(f"unknown command {args.command!r}")
        finally:
            client.close()
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
