"""
Subcommands of the clanroute CLI.
"""

from .base import BaseCommand, BaseCommandParams
from .factory import CommandFactory

__all__ = ["BaseCommand", "BaseCommandParams", "CommandFactory"]
