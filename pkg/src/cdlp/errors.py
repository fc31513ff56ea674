from __future__ import annotations


class CdlpError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(CdlpError, ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{where}{message}")


class ConfigError(InputError):
    pass


class EmptyGraphError(InputError):
    def __init__(self, message: str = "graph has no edges"):
        super().__init__(message)


class GenerationError(CdlpError, RuntimeError):
    def __init__(self, phase: str, message: str):
        self.phase = phase
        super().__init__(f"generation failed in phase '{phase}': {message}")


class ContractError(CdlpError, ValueError):
    pass


class DegenerateStageError(ContractError):
    def __init__(self, stage: str, message: str = "stage graph has no edges left"):
        self.stage = stage
        super().__init__(f"degenerate stage {stage}: {message}")


EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONTRACT = 2
EXIT_PARTIAL = 3


def exit_code_for(exc: BaseException) -> int:
    # input, parse, config, generation and filesystem failures all share code 1
    if isinstance(exc, ContractError):
        return EXIT_CONTRACT
    return EXIT_INPUT
