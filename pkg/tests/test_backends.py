import importlib.util
import json
import os
import subprocess
import sys

import numpy as np
import pytest

SCRIPT = """
import json, numpy as np
from farkascert import _kernels, decide
from farkascert.instances import instance_stream
out = {"backend": _kernels.BACKEND, "results": []}
for i, kind, p in instance_stream(41, 60):
    cert, ids, _ = decide(p)
    vec = cert.x_normal if cert.status == "feasible" else cert.u_cert
    out["results"].append([cert.status, [float(v) for v in vec]])
print(json.dumps(out))
"""


def _run(flag):
    env = {**os.environ, "FARKAS_NUMBA": flag}
    proc = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def test_numpy_fallback_is_selected_by_flag():
    assert _run("0")["backend"] == "numpy"


@pytest.mark.skipif(importlib.util.find_spec("numba") is None, reason="numba not installed")
def test_backends_agree():
    fast, slow = _run("1"), _run("0")
    assert fast["backend"] == "numba"
    for (s1, v1), (s2, v2) in zip(fast["results"], slow["results"], strict=True):
        assert s1 == s2
        np.testing.assert_allclose(v1, v2, atol=1e-9 * (1 + np.linalg.norm(v1)))
