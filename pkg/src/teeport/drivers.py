"""Generated execution drivers for the managed (original) side.

A driver is a small standalone script that imports one function from its
source file in isolation and feeds it typed-literal cases. Single-case
drivers read one line on stdin and print the wire-format result; batch
drivers run a whole case file under the coverage tracer and emit a JSON
blob of line events and per-case outcomes. Drivers run under the tool's
own interpreter, so they may import this package.

Only Python has an execution adapter registered in this build; Java
records parse and classify but cannot be driven.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

from .errors import DriverBuildError
from .records import FunctionRecord
from .shims import ShimSpec

_PRELUDE = '''\
import sys

MODULE_PATH = {module_path!r}
QUALNAME = {qualname!r}
SIGNATURE = {signature!r}
INVOKE_STATIC = {invoke_static!r}
SHIM = {shim!r}


def install_shim():
    if SHIM != "mock-stream":
        return
    import os
    import random
    import secrets

    from teeport.shims import MockRandomStream

    stream = MockRandomStream()
    os.urandom = stream.take
    secrets.token_bytes = stream.take
    secrets.token_hex = lambda nbytes=32: stream.take(nbytes).hex()
    random.randbytes = stream.take


def load_function():
    import importlib.util

    spec = importlib.util.spec_from_file_location("target_module", MODULE_PATH)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    obj = module
    parts = QUALNAME.split(".")
    for part in parts[:-1]:
        obj = getattr(obj, part)
    fn = getattr(obj, parts[-1])
    if INVOKE_STATIC:
        import functools

        fn = functools.partial(fn, None)
    return fn
'''

_SINGLE_MAIN = '''

def main():
    from teeport import vectors
    from teeport.semtypes import Signature

    signature = Signature.parse(SIGNATURE)
    install_shim()
    fn = load_function()
    line = sys.stdin.readline()
    args = vectors.parse_case(line, signature)
    result = fn(*args)
    sys.stdout.write(vectors.format_value(result, signature.returns) + "\\n")


main()
'''

_BATCH_MAIN = '''

def main():
    import json

    from teeport import vectors
    from teeport.semtypes import Signature

    signature = Signature.parse(SIGNATURE)
    install_shim()
    fn = load_function()

    cases_path, out_path = sys.argv[1], sys.argv[2]
    with open(cases_path, encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]

    events = []

    def global_tracer(frame, event, arg):
        if frame.f_code.co_filename == MODULE_PATH:
            return local_tracer
        return None

    def local_tracer(frame, event, arg):
        if event == "line":
            events.append(frame.f_lineno)
        elif event == "return":
            events.append(-1)
        return local_tracer

    case_results = []
    for case_id, line in enumerate(lines):
        args = vectors.parse_case(line, signature)
        sys.settrace(global_tracer)
        try:
            result = fn(*args)
            err = None
        except Exception as exc:
            result = None
            err = f"{type(exc).__name__}: {exc}"
        finally:
            sys.settrace(None)
        entry = {"caseId": case_id, "error": err}
        if err is None:
            entry["output"] = vectors.format_value(result, signature.returns)
        case_results.append(entry)

    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump({"events": events, "cases": case_results}, fh)


main()
'''


def driver_source(
    record: FunctionRecord,
    project_root: str | Path,
    mode: str,
    shim: ShimSpec,
) -> str:
    if record.language != "python":
        raise DriverBuildError(
            f"no execution driver registered for language {record.language!r}"
        )
    if mode not in ("single", "batch"):
        raise DriverBuildError(f"unknown driver mode {mode!r}")
    module_path = str((Path(project_root) / record.path).resolve())
    prelude = _PRELUDE.format(
        module_path=module_path,
        qualname=record.qualname,
        signature=record.signature.render(),
        invoke_static=record.invoke_static,
        shim=shim.kind,
    )
    return prelude + (_SINGLE_MAIN if mode == "single" else _BATCH_MAIN)


def write_driver(
    record: FunctionRecord,
    project_root: str | Path,
    scratch_dir: str | Path,
    mode: str,
    shim: ShimSpec,
) -> Path:
    """Write the driver script under scratch_dir; content-addressed name."""
    source = driver_source(record, project_root, mode, shim)
    digest = hashlib.sha256(source.encode("utf-8")).hexdigest()[:12]
    scratch = Path(scratch_dir)
    scratch.mkdir(parents=True, exist_ok=True)
    path = scratch / f"driver_{mode}_{digest}.py"
    if not path.exists():
        path.write_text(source, encoding="utf-8")
    return path
