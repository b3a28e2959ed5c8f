"""Shared helpers: deterministic reductions, number formatting, threading."""
from __future__ import annotations

import concurrent.futures
import datetime
import os
import time

import numpy as np

THREADS_ENV = "HSPSIM_THREADS"
TIMESTAMP_ENV = "HSPSIM_TIMESTAMP"


def pairwise_sum(values):
    """Sum a list of numbers/arrays by balanced pairing.

    The reduction tree depends only on len(values), so results are
    bit-identical no matter how the values were produced (threads included).
    """
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def fmt_float(x):
    """Render a real number at 12 significant digits."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.12g}"


def fmt_complex(z):
    """Render a complex number as 'a+bi' at 12 significant digits."""
    z = complex(z)
    re, im = fmt_float(z.real), fmt_float(z.imag)
    sign = "+" if not im.startswith("-") else ""
    return f"{re}{sign}{im}i"


def dumps_report(obj, indent=2):
    """Serialize nested dict/list/scalars to JSON text.

    Floats are printed at 12 significant digits; dict insertion order is
    preserved.  Hand-rolled because json.dumps offers no float formatting.
    """
    out = []
    _emit(obj, out, indent, 0)
    return "".join(out) + "\n"


def _emit(obj, out, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f'{pad}"{k}": ')
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(obj))
    elif isinstance(obj, (complex, np.complexfloating)):
        out.append(f'"{fmt_complex(obj)}"')
    else:
        text = str(obj).replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'"{text}"')


def thread_count(flag=None):
    """Resolve the worker count: explicit flag wins, then HSPSIM_THREADS, then 1."""
    if flag:
        return max(1, int(flag))
    env = os.environ.get(THREADS_ENV, "")
    return max(1, int(env)) if env.strip() else 1


def parallel_map(fn, items, threads=1):
    """Map fn over items, optionally with a thread pool.

    Results always come back in item order, so downstream pairwise
    reductions are independent of the worker count.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def timestamp():
    """UTC ISO timestamp; frozen by SOURCE_DATE_EPOCH / HSPSIM_TIMESTAMP."""
    raw = os.environ.get(TIMESTAMP_ENV) or os.environ.get("SOURCE_DATE_EPOCH")
    t = int(raw) if raw and raw.strip() else int(time.time())
    return datetime.datetime.fromtimestamp(t, datetime.timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ")
