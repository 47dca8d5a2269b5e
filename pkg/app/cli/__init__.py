# app/cli/__init__.py
from .cli_v1 import COMMAND_CONFIGS, commands_command, register_commands

__all__ = ["COMMAND_CONFIGS", "commands_command", "register_commands"]
