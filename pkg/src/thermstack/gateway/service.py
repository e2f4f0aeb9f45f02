"""HTTP front end: design documents, asynchronous jobs, result retrieval.

Single-process service with a bounded worker pool; documents and finished
job artifacts persist as files under the state directory and survive
restarts. Job results are content-addressed (document content + job kind),
so resubmitting an unchanged design reuses the finished result.
"""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any
from uuid import uuid4

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse

from ..thermal.report import emit_heatmap, emit_summary
from .documents import content_hash, run_simulate, run_sweep_document, validate_document

JOB_KINDS = ("simulate", "sweep")


@dataclass
class JobRecord:
    id: str
    design_id: str
    kind: str
    state: str = "queued"  # queued -> running -> done | failed
    progress: float = 0.0
    error: str | None = None
    created: float = field(default_factory=time.time)
    finished: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class StateStore:
    """File-backed storage for documents and job records/artifacts."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "designs").mkdir(parents=True, exist_ok=True)
        (self.root / "jobs").mkdir(parents=True, exist_ok=True)

    # designs
    def design_path(self, design_id: str) -> Path:
        return self.root / "designs" / f"{design_id}.json"

    def save_design(self, record: dict) -> None:
        self.design_path(record["id"]).write_text(json.dumps(record, indent=1))

    def load_design(self, design_id: str) -> dict | None:
        p = self.design_path(design_id)
        if not p.exists():
            return None
        return json.loads(p.read_text())

    def all_designs(self) -> list[dict]:
        return [json.loads(p.read_text()) for p in sorted((self.root / "designs").glob("*.json"))]

    # jobs
    def job_meta_path(self, job_id: str) -> Path:
        return self.root / "jobs" / f"{job_id}.json"

    def job_dir(self, job_id: str) -> Path:
        return self.root / "jobs" / job_id

    def save_job(self, job: JobRecord) -> None:
        self.job_meta_path(job.id).write_text(json.dumps(job.to_dict(), indent=1))

    def load_jobs(self) -> dict[str, JobRecord]:
        out = {}
        for p in (self.root / "jobs").glob("*.json"):
            data = json.loads(p.read_text())
            out[data["id"]] = JobRecord(**data)
        return out

    def write_artifact(self, job_id: str, name: str, text: str) -> None:
        d = self.job_dir(job_id)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)

    def read_artifact(self, job_id: str, name: str) -> str | None:
        p = self.job_dir(job_id) / name
        if not p.exists():
            return None
        return p.read_text()


def _simulate_artifacts(store: StateStore, job: JobRecord, content: dict, set_progress) -> None:
    result, rt = run_simulate(content)
    set_progress(0.8)
    summary_dict = result.summary.to_dict()
    die_layers = rt.stack.die_indices()
    heatmaps: dict[str, Any] = {"layers": {}}
    store.write_artifact(job.id, "summary.json", json.dumps(summary_dict, indent=1))
    store.write_artifact(job.id, "summary.txt", emit_summary(result.summary))
    g = rt.grid
    for layer in range(len(rt.stack.layers)):
        text = emit_heatmap(result.field, layer)
        store.write_artifact(job.id, f"heatmap_{layer}.txt", text)
        heatmaps["layers"][str(layer)] = {
            "layer": layer,
            "kind": rt.stack.layers[layer].kind,
            "rows": g.rows,
            "cols": g.cols,
            "cell_width_m": g.cell_width,
            "cell_height_m": g.cell_height,
            "unit": "K",
            "temperatures": [[float(t) for t in row] for row in result.field.temperatures[layer]],
        }
    heatmaps["die_layers"] = die_layers
    heatmaps["layer_count"] = len(rt.stack.layers)
    store.write_artifact(job.id, "heatmaps.json", json.dumps(heatmaps))


def _sweep_artifacts(store: StateStore, job: JobRecord, content: dict, set_progress) -> None:
    report, result, rt = run_sweep_document(content)
    set_progress(0.9)
    store.write_artifact(job.id, "table.txt", report.to_text())
    store.write_artifact(job.id, "ranking.json", json.dumps(report.to_dict(), indent=1))
    records = [
        {
            "point": r.point,
            "workload": r.workload,
            "stack_max_k": r.stack_max_k,
            "layer_max_k": list(r.layer_max_k),
            "runtime_s": r.runtime_s,
        }
        for r in result.records
    ]
    store.write_artifact(job.id, "records.json", json.dumps(records, indent=1))


def create_app(state_dir: str | Path, max_workers: int | None = None) -> FastAPI:
    store = StateStore(state_dir)
    app = FastAPI(title="thermstack gateway")
    jobs: dict[str, JobRecord] = store.load_jobs()
    for job in jobs.values():
        if job.state in ("queued", "running"):
            job.state = "failed"
            job.error = "interrupted by service restart"
            store.save_job(job)
    lock = threading.Lock()
    pool = ThreadPoolExecutor(max_workers=max_workers or os.cpu_count() or 2)
    app.state.store = store
    app.state.jobs = jobs

    def get_design_or_404(design_id: str) -> dict:
        rec = store.load_design(design_id)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"unknown design {design_id!r}")
        return rec

    def get_job_or_404(job_id: str) -> JobRecord:
        with lock:
            job = jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job

    def require_done(job: JobRecord) -> None:
        if job.state != "done":
            raise HTTPException(
                status_code=404, detail=f"job {job.id!r} has no results (state: {job.state})"
            )

    def execute(job_id: str, content: dict) -> None:
        with lock:
            job = jobs[job_id]
            job.state = "running"
            job.progress = 0.05
            store.save_job(job)

        def set_progress(p: float) -> None:
            with lock:
                job.progress = max(job.progress, min(1.0, p))
                store.save_job(job)

        try:
            set_progress(0.1)
            if job.kind == "simulate":
                _simulate_artifacts(store, job, content, set_progress)
            else:
                _sweep_artifacts(store, job, content, set_progress)
            with lock:
                job.state = "done"
                job.progress = 1.0
                job.finished = time.time()
                store.save_job(job)
        except Exception as exc:  # noqa: BLE001 - job isolation
            with lock:
                job.state = "failed"
                job.error = f"{type(exc).__name__}: {exc}"
                job.finished = time.time()
                store.save_job(job)

    @app.post("/designs")
    def create_design(body: dict):
        content = body.get("content")
        if content is None:
            raise HTTPException(status_code=400, detail={"violations": ["missing 'content'"]})
        violations = validate_document(content)
        if violations:
            raise HTTPException(status_code=400, detail={"violations": violations})
        design_id = body.get("id") or uuid4().hex[:12]
        if store.load_design(design_id) is not None:
            raise HTTPException(status_code=409, detail=f"design {design_id!r} already exists")
        now = time.time()
        record = {
            "id": design_id,
            "name": content.get("name", design_id),
            "version": 0,
            "created": now,
            "modified": now,
            "content": content,
        }
        store.save_design(record)
        return {"id": design_id, "version": 0, "violations": []}

    @app.get("/designs/{design_id}")
    def get_design(design_id: str):
        return get_design_or_404(design_id)

    @app.put("/designs/{design_id}")
    def put_design(design_id: str, body: dict):
        record = get_design_or_404(design_id)
        if body.get("version") != record["version"]:
            raise HTTPException(
                status_code=409,
                detail=f"version conflict: document is at {record['version']}",
            )
        content = body.get("content")
        if content is None:
            raise HTTPException(status_code=400, detail={"violations": ["missing 'content'"]})
        violations = validate_document(content)
        if violations:
            raise HTTPException(status_code=400, detail={"violations": violations})
        record["content"] = content
        record["name"] = content.get("name", record["name"])
        record["version"] += 1
        record["modified"] = time.time()
        store.save_design(record)
        return {"id": design_id, "version": record["version"], "violations": []}

    @app.post("/designs/{design_id}/jobs")
    def submit_job(design_id: str, body: dict):
        record = get_design_or_404(design_id)
        kind = body.get("kind")
        if kind not in JOB_KINDS:
            raise HTTPException(status_code=400, detail=f"kind must be one of {JOB_KINDS}")
        violations = validate_document(record["content"])
        if violations:
            raise HTTPException(status_code=400, detail={"violations": violations})
        if kind == "sweep" and not record["content"].get("sweep"):
            raise HTTPException(status_code=400, detail={"violations": ["document has no sweep definition"]})
        # content-stable id: identical document content + kind reuses results
        job_id = content_hash(record["content"], kind)
        with lock:
            existing = jobs.get(job_id)
            if existing is not None and existing.state in ("queued", "running", "done"):
                return {"job_id": job_id, "state": existing.state, "cached": existing.state == "done"}
            job = JobRecord(id=job_id, design_id=design_id, kind=kind)
            jobs[job_id] = job
            store.save_job(job)
        content_snapshot = json.loads(json.dumps(record["content"]))  # copy-on-write
        pool.submit(execute, job_id, content_snapshot)
        return {"job_id": job_id, "state": "queued", "cached": False}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        return get_job_or_404(job_id).to_dict()

    @app.get("/jobs/{job_id}/summary")
    def get_summary(job_id: str):
        job = get_job_or_404(job_id)
        require_done(job)
        text = store.read_artifact(job_id, "summary.json")
        if text is None:
            raise HTTPException(status_code=404, detail="job has no summary artifact")
        return json.loads(text)

    @app.get("/jobs/{job_id}/heatmap")
    def get_heatmap(job_id: str, layer: int = Query(0, ge=0), format: str = "json"):
        job = get_job_or_404(job_id)
        require_done(job)
        if format == "text":
            text = store.read_artifact(job_id, f"heatmap_{layer}.txt")
            if text is None:
                raise HTTPException(status_code=404, detail=f"no heatmap for layer {layer}")
            return PlainTextResponse(text)
        blob = store.read_artifact(job_id, "heatmaps.json")
        if blob is None:
            raise HTTPException(status_code=404, detail="job has no heatmap artifacts")
        data = json.loads(blob)
        entry = data["layers"].get(str(layer))
        if entry is None:
            raise HTTPException(status_code=404, detail=f"no heatmap for layer {layer}")
        return entry

    @app.get("/jobs/{job_id}/ranking")
    def get_ranking(job_id: str):
        job = get_job_or_404(job_id)
        require_done(job)
        blob = store.read_artifact(job_id, "ranking.json")
        if blob is None:
            raise HTTPException(status_code=404, detail="job has no ranking (not a sweep?)")
        return json.loads(blob)

    return app


def serve(bind: str, state_dir: str | Path, max_workers: int | None = None) -> None:
    """Run the gateway service until interrupted."""
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(state_dir, max_workers=max_workers)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080), log_level="warning")
