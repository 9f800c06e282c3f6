"""Line-oriented interactive session.

Declarations (``def``/``let``) are kept and replayed in front of every later
input, so bindings and ``let res`` resources persist. Resources that no
declaration binds are treated as ambient, which lets ``:type`` answer for
open types such as ``fn (x: Number[1r]) => x + x``.
"""
from __future__ import annotations

import logging
from typing import Callable, List, Optional

import typer

from gradual_sensitivity.checker.elaborator import TypeEnv, elaborate
from gradual_sensitivity.errors import GradualSensitivityError
from gradual_sensitivity.io.settings import GsensSettings
from gradual_sensitivity.machine import evaluate
from gradual_sensitivity.models.terms import Term
from gradual_sensitivity.models.types import SType
from gradual_sensitivity.models.values import mon, msens
from gradual_sensitivity.syntax.desugar import audit_scopes, desugar
from gradual_sensitivity.syntax.parser import parse_source

logger = logging.getLogger(__name__)

PROMPT = "gsens> "
HELP = """\
  <expr>          evaluate an expression
  def ... ; let ... ;
                  add a declaration to the session
  :type <expr>    print the type of an expression
  :trace <expr>   evaluate and print every machine step
  :help           this text
  :quit           leave the session"""


class Repl:
    def __init__(self, settings: GsensSettings) -> None:
        self.settings = settings
        self.declarations: List[str] = []
        self.finished = False

    def _compile(self, text: str) -> tuple[Term, SType]:
        expr = desugar(parse_source("\n".join(self.declarations + [text])))
        ambient = audit_scopes(expr).free_resources
        return elaborate(expr, TypeEnv(resources=ambient))

    def execute(self, line: str) -> Optional[str]:
        """Handle one input line and return what the session prints, if anything."""
        text = line.strip()
        if not text:
            return None
        try:
            if text.startswith(":"):
                return self._command(text)
            if text.startswith(("def ", "let ")):
                return self._declare(text)
            return self._evaluate(text, trace=False)
        except GradualSensitivityError as exc:
            location = f"{exc.span}: " if exc.span is not None else ""
            return f"{location}error {exc}"

    def _command(self, text: str) -> Optional[str]:
        name, _, argument = text.partition(" ")
        if name in (":quit", ":q"):
            self.finished = True
            return None
        if name == ":help":
            return HELP
        if name == ":type" and argument.strip():
            return str(self._compile(argument.strip())[1])
        if name == ":trace" and argument.strip():
            return self._evaluate(argument.strip(), trace=True)
        return f"unknown command '{text}'; try :help"

    def _declare(self, text: str) -> Optional[str]:
        if not text.endswith(";"):
            text += ";"
        self._compile(text)
        self.declarations.append(text)
        logger.debug("Session now holds %d declarations", len(self.declarations))
        return None

    def _evaluate(self, text: str, *, trace: bool) -> str:
        term, _ = self._compile(text)
        result = evaluate(
            term, seed=self.settings.seed, budget=self.settings.step_budget, trace=trace
        )
        lines = [str(event) for event in result.trace]
        if result.value is not None:
            monitored = str(msens(mon(result.value))) or "∅"
            lines.append(f"{result.value}  (monitored: {monitored})")
        elif result.failure is not None:
            lines.append(f"runtime error {result.failure}")
        else:
            lines.append(f"step budget exhausted after {result.steps} steps")
        return "\n".join(lines)

    def loop(
        self,
        read: Callable[[str], str] = input,
        write: Callable[[str], None] = typer.echo,
    ) -> None:
        while not self.finished:
            try:
                line = read(PROMPT)
            except EOFError:
                break
            output = self.execute(line)
            if output:
                write(output)
