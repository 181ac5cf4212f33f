"""
Command factory for creating typed subcommands from parsed arguments.
"""

import logging
from typing import Any

from pydantic import ValidationError

from src.commands.base import BaseCommand, BaseCommandParams
from src.commands.bench import (
    GenGirthCommand,
    GenGirthParams,
    PathDistCommand,
    PathDistParams,
    VerifyCommand,
    VerifyParams,
)
from src.commands.distribution import (
    BuildDistCommand,
    BuildDistParams,
    SampleCommand,
    SampleParams,
)
from src.commands.embed import (
    EmbedSpanCommand,
    EmbedSpanParams,
    EmbedUltraCommand,
    EmbedUltraParams,
)
from src.commands.routing import RouteSimCommand, RouteSimParams
from src.utils.config import Config
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


class CommandFactory:
    """Factory for creating commands from parameters with type safety."""

    _command_registry: dict[str, tuple[type[BaseCommand], type[BaseCommandParams]]] = {
        "embed-ultra": (EmbedUltraCommand, EmbedUltraParams),
        "embed-span": (EmbedSpanCommand, EmbedSpanParams),
        "build-dist": (BuildDistCommand, BuildDistParams),
        "sample": (SampleCommand, SampleParams),
        "route-sim": (RouteSimCommand, RouteSimParams),
        "gen-girth": (GenGirthCommand, GenGirthParams),
        "verify": (VerifyCommand, VerifyParams),
        "path-dist": (PathDistCommand, PathDistParams),
    }

    @classmethod
    def create_command(cls, data: dict[str, Any], config: Config) -> BaseCommand:
        """
        Create a command from parsed arguments with validation.

        Args:
            data: Parsed flags, including ``command``.
            config: Application configuration.

        Returns:
            Validated command ready to run.

        Raises:
            InputError: If the command is unknown or validation fails.
        """
        name = data.get("command")
        if name not in cls._command_registry:
            raise InputError(f"unknown subcommand: {name}")

        command_class, params_class = cls._command_registry[name]
        try:
            params = params_class(**data)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or name
            logger.error(f"Invalid parameters for {name}: {e}")
            raise InputError(f"invalid parameters for {name}: {where}: {first['msg']}") from e
        logger.debug(f"Created {name} command with params: {params}")
        return command_class(params, config)

    @classmethod
    def register_command(
        cls,
        name: str,
        command_class: type[BaseCommand],
        params_class: type[BaseCommandParams],
    ) -> None:
        """Register a subcommand; an existing name is replaced."""
        cls._command_registry[name] = (command_class, params_class)
        logger.info(f"Registered command: {name}")

    @classmethod
    def get_supported_commands(cls) -> list[str]:
        return list(cls._command_registry)
