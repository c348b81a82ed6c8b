"""CLI as a network client of a live service instance."""

import json
import threading
import time

import pytest
import uvicorn

from secantlab.app import app
from secantlab.cli import main


@pytest.fixture(scope="module")
def server_url():
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            pytest.fail("server did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_remote_constants(server_url, capsys):
    code, out = run_cli(
        capsys, "constants", "--m", "2", "--server", server_url
    )
    assert code == 0 and "0.61803398874989" in out


def test_remote_trace_breakdown_exit_code(server_url, capsys):
    code, out = run_cli(
        capsys,
        "trace", "--problem", "pure_power_2", "--k0=-2", "--e0", "1e-3",
        "--server", server_url, "--output", "json",
    )
    assert code == 2
    assert json.loads(out)["breakdown_step"] == 3


def test_remote_classify_matches_local(server_url, capsys):
    args = ("classify", "--m", "4", "--k0=-1.45", "--e0", "1e-4")
    _, local = run_cli(capsys, *args)
    _, remote = run_cli(capsys, *args, "--server", server_url)
    assert local == remote


def test_remote_server_down_is_clean_error(capsys):
    code, _ = run_cli(
        capsys,
        "classify", "--m", "2", "--k0", "0.5", "--e0", "1e-4",
        "--server", "http://127.0.0.1:9",
    )
    assert code == 1
