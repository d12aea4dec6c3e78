import io
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image as PILImage
from skimage.color import hsv2rgb

from mmnn.cli import main as cli_main
from mmnn.image import write_points_csv
from mmnn.service import create_app
from mmnn.synthetic import two_blob_scene

SCENE = two_blob_scene(size=40, noise=0.02, seed=7)


def png_bytes_of_scene():
    rgb = np.clip(np.round(hsv2rgb(SCENE.image.data) * 255), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    PILImage.fromarray(rgb, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def gold_bytes_of_scene():
    buf = io.BytesIO()
    arr = np.where(SCENE.gold.bits, 255, 0).astype(np.uint8)
    PILImage.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture()
def client(tmp_path):
    app = create_app(data_dir=tmp_path / "data", ui_dir=tmp_path / "no-ui")
    with TestClient(app) as c:
        yield c


def upload_session(client, with_gold=True):
    files = {"image": ("scene.png", png_bytes_of_scene(), "image/png")}
    if with_gold:
        files["gold"] = ("gold.png", gold_bytes_of_scene(), "image/png")
    r = client.post("/api/sessions", files=files)
    assert r.status_code == 201, r.text
    return r.json()


def wait_job(client, sid, jid, timeout=60.0):
    deadline = time.time() + timeout
    statuses = []
    while time.time() < deadline:
        r = client.get(f"/api/sessions/{sid}/jobs/{jid}")
        assert r.status_code == 200
        doc = r.json()
        statuses.append(doc["status"])
        if doc["status"] in ("done", "failed"):
            return doc, statuses
        time.sleep(0.05)
    raise TimeoutError("job did not finish")


TRAIN_BODY = {"seed": 5, "starts": 4, "steps": 10, "stepsize": 0.05,
              "fdres": 0.01, "objective": "a", "radius": 1, "sort": True,
              "d_first": 5.0, "gain": 20.0, "offset": 0.0, "threshold": 0.5,
              "subsample": 2}


def test_session_upload_reports_dims(client):
    doc = upload_session(client)
    assert (doc["width"], doc["height"]) == (40, 40)
    assert doc["has_gold"] is True


def test_point_crud_and_validation(client):
    sid = upload_session(client)["id"]
    r = client.post(f"/api/sessions/{sid}/points",
                    json={"x": 12, "y": 14, "role": "prototype"})
    assert r.status_code == 200
    assert len(r.json()) == 1
    r2 = client.post(f"/api/sessions/{sid}/points",
                     json={"x": 34, "y": 4, "role": "counter"})
    assert len(r2.json()) == 2

    bad = client.post(f"/api/sessions/{sid}/points",
                      json={"x": 99, "y": 0, "role": "prototype"})
    assert bad.status_code == 400
    assert bad.json()["detail"]["field"] == "x"

    bad_role = client.post(f"/api/sessions/{sid}/points",
                           json={"x": 1, "y": 1, "role": "anchor"})
    assert bad_role.status_code == 400

    r3 = client.delete(f"/api/sessions/{sid}/points/0")
    assert r3.status_code == 200
    assert len(r3.json()) == 1
    assert client.delete(f"/api/sessions/{sid}/points/7").status_code == 404


def test_unknown_session_404(client):
    assert client.get("/api/sessions/nope/jobs/x").status_code == 404
    assert client.post("/api/sessions/nope/points",
                       json={"x": 0, "y": 0}).status_code == 404


def test_train_requires_points_and_gold(client):
    sid = upload_session(client, with_gold=False)["id"]
    r = client.post(f"/api/sessions/{sid}/train", json=TRAIN_BODY)
    assert r.status_code == 400  # no points yet
    client.post(f"/api/sessions/{sid}/points", json={"x": 12, "y": 14})
    r2 = client.post(f"/api/sessions/{sid}/train", json=TRAIN_BODY)
    assert r2.status_code == 400  # no gold


def test_segmentation_404_until_first_result(client):
    sid = upload_session(client)["id"]
    assert client.get(f"/api/sessions/{sid}/segmentation.png").status_code == 404
    assert client.get(f"/api/sessions/{sid}/raw.json").status_code == 404


def test_full_round_trip_matches_cli(client, tmp_path):
    sid = upload_session(client)["id"]
    p, c = SCENE.prototype, SCENE.counter
    client.post(f"/api/sessions/{sid}/points",
                json={"x": p.x, "y": p.y, "role": p.role})
    client.post(f"/api/sessions/{sid}/points",
                json={"x": c.x, "y": c.y, "role": c.role})
    r = client.post(f"/api/sessions/{sid}/train", json=TRAIN_BODY)
    assert r.status_code == 202
    jid = r.json()["job_id"]
    doc, statuses = wait_job(client, sid, jid)
    assert doc["status"] == "done"
    assert doc["ba"] is not None
    # status transitions are monotone: running* then done
    assert all(s == "running" for s in statuses[:-1])

    png = client.get(f"/api/sessions/{sid}/segmentation.png")
    assert png.status_code == 200

    # CLI with the identical inputs, seed, and parameters
    tmp = tmp_path / "cli"
    tmp.mkdir()
    (tmp / "scene.png").write_bytes(png_bytes_of_scene())
    (tmp / "gold.png").write_bytes(gold_bytes_of_scene())
    write_points_csv([p, c], tmp / "points.csv")
    assert cli_main(["train",
                     "--image", str(tmp / "scene.png"),
                     "--gold", str(tmp / "gold.png"),
                     "--points", str(tmp / "points.csv"),
                     "--seed", "5", "--starts", "4", "--steps", "10",
                     "--stepsize", "0.05", "--fdres", "0.01",
                     "--objective", "a", "--subsample", "2", "--radius", "1",
                     "--out-dir", str(tmp / "out")]) == 0
    assert (tmp / "out" / "mask.png").read_bytes() == png.content

    raw = client.get(f"/api/sessions/{sid}/raw.json").json()
    assert raw["width"] == 40 and raw["height"] == 40
    assert len(raw["values"]) == 1600

    grid = client.get(f"/api/sessions/{sid}/landscape",
                      params={"free": "w0,w1", "res": 0.5}).json()
    assert len(grid["axis1"]) == 5
    assert len(grid["values"]) == 5 and len(grid["values"][0]) == 5


def test_second_job_while_running_409(client):
    sid = upload_session(client)["id"]
    p, c = SCENE.prototype, SCENE.counter
    client.post(f"/api/sessions/{sid}/points",
                json={"x": p.x, "y": p.y, "role": p.role})
    client.post(f"/api/sessions/{sid}/points",
                json={"x": c.x, "y": c.y, "role": c.role})
    slow = dict(TRAIN_BODY, starts=10, steps=30, subsample=1)
    r = client.post(f"/api/sessions/{sid}/train", json=slow)
    assert r.status_code == 202
    r2 = client.post(f"/api/sessions/{sid}/train", json=TRAIN_BODY)
    assert r2.status_code == 409
    wait_job(client, sid, r.json()["job_id"])
    # after completion a new job is accepted and gets a fresh id
    r3 = client.post(f"/api/sessions/{sid}/train", json=TRAIN_BODY)
    assert r3.status_code == 202
    assert r3.json()["job_id"] != r.json()["job_id"]


def test_landscape_before_training_404(client):
    sid = upload_session(client)["id"]
    assert client.get(f"/api/sessions/{sid}/landscape").status_code == 404
