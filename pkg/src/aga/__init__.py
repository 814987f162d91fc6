"""Cost-efficient believable-agent simulation framework."""

__version__ = "0.1.0"

from .driver import ActivityLedger, SimulationConfig, SimulationReport, run
from .embedding import Embedder, EmbedderConfig, cosine, default_embedder
from .gateway import (Category, CompletionResult, LLMGateway, MockBackend,
                      PromptRequest, TokenUsage, parse_score_response)
from .policy import (ExecCondition, ItemPredicate, PolicyRecord, PolicyStore,
                     PolicyStoreConfig, decompose, derive_condition)
from .scenario import Scenario, fixture_path, load_scenario
from .world import ActionCommand, EnvironmentSnapshot, execute, parse_command, render_command

__all__ = [
    "ActionCommand", "ActivityLedger", "Category", "CompletionResult",
    "Embedder", "EmbedderConfig", "EnvironmentSnapshot", "ExecCondition",
    "ItemPredicate", "LLMGateway", "MockBackend", "PolicyRecord",
    "PolicyStore", "PolicyStoreConfig", "PromptRequest", "Scenario",
    "SimulationConfig", "SimulationReport", "TokenUsage", "cosine",
    "decompose", "default_embedder", "derive_condition", "execute",
    "fixture_path", "load_scenario", "parse_command", "parse_score_response",
    "render_command", "run",
]
