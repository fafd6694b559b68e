"""Command line client.

Every subcommand except `serve` talks to the HTTP API: against --url when
given, otherwise against an in-process instance of the service, so batch
use needs no running daemon.  Exit codes: 0 ok, 1 parse error, 2 config
error, 3 engine error.
"""

from __future__ import annotations

import argparse
import json
import sys

EXIT_CODES = {"parse": 1, "config": 2, "engine": 3}


class CliError(Exception):
    def __init__(self, kind: str, message: str) -> None:
        super().__init__(message)
        self.kind = kind
        self.message = message


class ServiceClient:
    def __init__(self, url: str | None) -> None:
        if url:
            import httpx

            self._client = httpx.Client(base_url=url, timeout=600.0)
        else:
            from starlette.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        try:
            resp = self._client.post(path, json=payload)
        except Exception as e:
            raise CliError("engine", f"service request failed: {e}") from e
        try:
            body = resp.json()
        except ValueError:
            raise CliError("engine", f"service returned non-JSON (status {resp.status_code})")
        if resp.status_code == 200:
            return body
        if isinstance(body, dict) and "error" in body:
            err = body["error"]
            raise CliError(err.get("kind", "engine"), err.get("message", "unknown error"))
        # pydantic request validation ends up here
        raise CliError("config", f"bad request: {json.dumps(body)}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise CliError("parse", f"cannot read {path}: {e}") from e


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise CliError("engine", f"cannot write {path}: {e}") from e


def _parse_param(raw: str) -> tuple[str, object]:
    if "=" not in raw:
        raise CliError("config", f"--param expects key=value, got {raw!r}")
    key, value = raw.split("=", 1)
    if "," in value:
        try:
            return key, [float(x) for x in value.split(",")]
        except ValueError:
            raise CliError("config", f"--param {key}: expected numbers, got {value!r}") from None
    for cast in (int, float):
        try:
            return key, cast(value)
        except ValueError:
            continue
    return key, value


def _mapping_args(p: argparse.ArgumentParser, *, required_mapping: bool) -> None:
    p.add_argument("--mapping", required=required_mapping,
                   help="absolute, relative, or rate")
    p.add_argument("--gain-t", default="constant:1", help="translation gain spec")
    p.add_argument("--gain-r", default="constant:1", help="rotation gain spec")
    p.add_argument("--ego-t", action="store_true", help="egocentric translations (negated gain)")
    p.add_argument("--ego-r", action="store_true", help="egocentric rotations (negated gain)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motionmap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="replay a device trace into an object trace")
    p.add_argument("--trace", required=True, help="device trace file (- for stdin)")
    _mapping_args(p, required_mapping=True)
    p.add_argument("--out", default=None, help="object trace output (default stdout)")
    p.add_argument("--url", default=None, help="service URL (default: in-process)")

    p = sub.add_parser("check", help="grade a trace for directional compliance and nulling")
    p.add_argument("--trace", required=True)
    _mapping_args(p, required_mapping=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="report output (default stdout)")
    p.add_argument("--url", default=None)

    p = sub.add_parser("classify", help="grade all mappings against all property cells")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.add_argument("--url", default=None)

    p = sub.add_parser("gen", help="generate a synthetic device trace")
    p.add_argument("--kind", required=True,
                   help="line, single_axis_rotation, helix, or random_walk")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--url", default=None)

    p = sub.add_parser("serve", help="run the HTTP/websocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8732)
    _mapping_args(p, required_mapping=False)

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    text = _read_text(args.trace)
    client = ServiceClient(args.url)
    body = client.post("/run", {
        "trace": text,
        "mapping": args.mapping,
        "gain_t": args.gain_t,
        "gain_r": args.gain_r,
        "ego_t": args.ego_t,
        "ego_r": args.ego_r,
    })
    _write_text(args.out, body["object_trace"])
    m = body["metrics"]
    print(
        f"steps={m['steps']} clutches={m['clutch_count']} "
        f"duration_s={m['duration_s']:.6g} path_t={m['path_len_t']:.6g} "
        f"path_r={m['path_len_r']:.6g}",
        file=sys.stderr,
    )
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    text = _read_text(args.trace)
    client = ServiceClient(args.url)
    body = client.post("/check", {
        "trace": text,
        "mapping": args.mapping,
        "gain_t": args.gain_t,
        "gain_r": args.gain_r,
        "ego_t": args.ego_t,
        "ego_r": args.ego_r,
        "tol": args.tol,
    })
    _write_text(args.out, body["report"])
    print(
        f"noncompliant_t={body['noncompliant_t']} noncompliant_r={body['noncompliant_r']} "
        f"nulling={body['nulling']}",
        file=sys.stderr,
    )
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    client = ServiceClient(args.url)
    body = client.post("/classify", {"seed": args.seed, "trials": args.trials, "tol": args.tol})
    _write_text(args.out, body["report"])
    for mapping, cells in body["verdicts"].items():
        cells_text = ", ".join(f"{k}={v}" for k, v in cells.items())
        print(f"{mapping}: {cells_text}", file=sys.stderr)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    params = dict(_parse_param(raw) for raw in args.param)
    client = ServiceClient(args.url)
    body = client.post("/gen", {"kind": args.kind, "params": params, "seed": args.seed})
    _write_text(args.out, body["trace"])
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .engine import MappingConfig, parse_mapping_kind
    from .gains import parse_gain_spec
    from .service import create_app
    from .service.session import default_config

    if args.mapping:
        config = MappingConfig(
            parse_mapping_kind(args.mapping),
            parse_gain_spec(args.gain_t),
            parse_gain_spec(args.gain_r),
            args.ego_t,
            args.ego_r,
        )
    else:
        config = default_config()
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "check": _cmd_check,
        "classify": _cmd_classify,
        "gen": _cmd_gen,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except CliError as e:
        print(f"error ({e.kind}): {e.message}", file=sys.stderr)
        return EXIT_CODES.get(e.kind, 3)


if __name__ == "__main__":
    sys.exit(main())
