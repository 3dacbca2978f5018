"""JSON config file loading and component wiring.

One config file drives the CLI and the HTTP service: corpus store path,
registry path, lecture variant, gateway backends, execution limits, and
session directory. Secrets (API key, contact string) come from
environment variables, never from the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus.store import CorpusStore
from .dsl import ExecLimits
from .errors import ConfigError
from .fixtures import registry_path as packaged_registry_path
from .gateway.http import HttpChatGateway, HttpEmbeddingGateway
from .gateway.local import LocalEmbeddingBackend
from .gateway.scripted import ScriptedChatBackend
from .lecture import ApiDescriptor, LectureConfig, Variant, load_registry
from .ncen.api import NcenApis
from .orchestrator import Orchestrator


@dataclass
class GatewaySpec:
    kind: str = "golden"
    dataset: str = ""
    replay: str = ""
    base_url: str = ""
    seed: int = 0
    model: str = ""


@dataclass
class AppConfig:
    corpus: str = ""
    registry: str = ""
    variant: str = "FULL"
    sessions_dir: str = "sessions"
    gateway: GatewaySpec = field(default_factory=GatewaySpec)
    embedding: GatewaySpec = field(default_factory=lambda: GatewaySpec(kind="local"))
    limits: ExecLimits = field(default_factory=ExecLimits)
    contact: str = ""
    rate: int = 10
    base_dir: Path = field(default_factory=Path)

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


def load_config(path: str | Path) -> AppConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    limits_obj = raw.get("limits", {})
    cfg = AppConfig(
        corpus=raw.get("corpus", ""),
        registry=raw.get("registry", ""),
        variant=raw.get("variant", "FULL"),
        sessions_dir=raw.get("sessions_dir", "sessions"),
        gateway=GatewaySpec(**raw.get("gateway", {})),
        embedding=GatewaySpec(**raw.get("embedding", {"kind": "local"})),
        limits=ExecLimits(
            max_steps=limits_obj.get("max_steps", ExecLimits.max_steps),
            max_api_calls=limits_obj.get("max_api_calls", ExecLimits.max_api_calls),
            max_value_bytes=limits_obj.get("max_value_bytes", ExecLimits.max_value_bytes),
        ),
        contact=raw.get("contact", ""),
        rate=int(raw.get("rate", 10)),
        base_dir=path.resolve().parent,
    )
    if not cfg.corpus:
        raise ConfigError(f"{path}: 'corpus' (store directory) is required")
    try:
        Variant(cfg.variant)
    except ValueError as exc:
        raise ConfigError(f"{path}: unknown variant {cfg.variant!r}") from exc
    return cfg


def build_apis(cfg: AppConfig) -> NcenApis:
    store_dir = cfg.resolve(cfg.corpus)
    if not (store_dir / "index.json").exists():
        raise ConfigError(
            f"no corpus index at {store_dir}; run 'groundflow ingest' first"
        )
    return NcenApis(CorpusStore(store_dir))


def build_registry(cfg: AppConfig) -> list[ApiDescriptor]:
    reg_path = cfg.resolve(cfg.registry) if cfg.registry else packaged_registry_path()
    return load_registry(reg_path)


def build_chat_gateway(cfg: AppConfig):
    spec = cfg.gateway
    kind = spec.kind.lower()
    if kind == "golden":
        from .dataset import load as load_dataset
        from .methods import GoldenWorkflowBackend

        if not spec.dataset:
            raise ConfigError("golden gateway needs 'dataset' (a QA JSONL path)")
        return GoldenWorkflowBackend(load_dataset(cfg.resolve(spec.dataset)))
    if kind == "fault":
        from .dataset import load as load_dataset
        from .methods import FaultInjectingBackend

        if not spec.dataset:
            raise ConfigError("fault gateway needs 'dataset' (a QA JSONL path)")
        return FaultInjectingBackend(load_dataset(cfg.resolve(spec.dataset)), seed=spec.seed)
    if kind == "scripted":
        if not spec.replay:
            raise ConfigError("scripted gateway needs 'replay' (a JSONL path)")
        return ScriptedChatBackend.from_replay_file(cfg.resolve(spec.replay))
    if kind == "http":
        return HttpChatGateway(spec.base_url)
    raise ConfigError(f"unknown chat gateway kind {spec.kind!r}")


def build_embedding_gateway(cfg: AppConfig):
    spec = cfg.embedding
    kind = spec.kind.lower()
    if kind == "local":
        return LocalEmbeddingBackend()
    if kind == "http":
        return HttpEmbeddingGateway(spec.base_url)
    raise ConfigError(f"unknown embedding gateway kind {spec.kind!r}")


def build_orchestrator(cfg: AppConfig, sessions_dir: Path | None = None) -> Orchestrator:
    apis = build_apis(cfg)
    return Orchestrator(
        registry=build_registry(cfg),
        gateway=build_chat_gateway(cfg),
        bindings=apis.registry_bindings(),
        limits=cfg.limits,
        sessions_dir=sessions_dir
        if sessions_dir is not None
        else cfg.resolve(cfg.sessions_dir),
    )


def lecture_config(cfg: AppConfig) -> LectureConfig:
    return LectureConfig(variant=Variant(cfg.variant))
