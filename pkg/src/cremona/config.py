from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Config:
    """Knobs shared by every computation; all have reproducible defaults."""

    jet_depth: int = 3
    max_degree: int = 64
    max_terms: int = 100_000
    stability_n: int = 50
    seed: int = 0
    elimination_retries: int = 8

    def with_(self, **kw) -> "Config":
        return replace(self, **kw)


DEFAULT = Config()
