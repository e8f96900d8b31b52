"""Enumerate injection points in a target source tree."""

import ast
import os
import re

from .types import BugType, InjectionPoint, ScanError

FUNCTION_NODES = (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)


def node_span(node):
    return (node.lineno, node.col_offset, node.end_lineno, node.end_col_offset)


def parent_map(tree):
    parents = {}
    for node in ast.walk(tree):
        for child in ast.iter_child_nodes(node):
            parents[child] = node
    return parents


def callee_name(call):
    func = call.func
    if isinstance(func, ast.Name):
        return func.id
    if isinstance(func, ast.Attribute):
        return func.attr
    return None


def keyword_pattern(keywords):
    if not keywords:
        return None
    alts = "|".join(re.escape(k) for k in sorted(keywords, key=lambda k: (-len(k), k)))
    return re.compile(rf"(?:^|_)(?:{alts})")


def is_matched(call, pattern):
    name = callee_name(call)
    # constructors and exception classes are not internal API calls
    return bool(pattern and name and not name[0].isupper() and pattern.search(name))


def in_function(node, parents):
    node = parents.get(node)
    while node is not None:
        if isinstance(node, FUNCTION_NODES):
            return True
        node = parents.get(node)
    return False


def is_consumed(call, parents):
    return not isinstance(parents.get(call), ast.Expr)


def call_operands(call):
    """(operand_index, node) pairs: positionals first, then keywords."""
    out = []
    for i, arg in enumerate(call.args):
        out.append((i, arg))
    base = len(call.args)
    for j, kw in enumerate(call.keywords):
        out.append((base + j, kw))
    return out


def _is_none(node):
    return isinstance(node, ast.Constant) and node.value is None


def corruptible(operand):
    value = operand.value if isinstance(operand, ast.keyword) else operand
    if isinstance(operand, ast.keyword) and operand.arg is None:
        return False
    return not isinstance(value, ast.Starred) and not _is_none(value)


def matched_calls(nodes, pattern):
    found = []
    for top in nodes:
        for node in ast.walk(top):
            if isinstance(node, ast.Call) and is_matched(node, pattern):
                found.append(node)
    found.sort(key=node_span)
    return found


# -- callee signatures ---------------------------------------------------------
class Signature:
    def __init__(self, fn, drop_first):
        args = fn.args
        positional = args.posonlyargs + args.args
        defaults = [None] * (len(positional) - len(args.defaults)) + list(args.defaults)
        if drop_first and positional:
            positional, defaults = positional[1:], defaults[1:]
        self.posonly = len(args.posonlyargs) - (1 if drop_first and args.posonlyargs else 0)
        self.positional = [a.arg for a in positional]
        self.has_default = {a.arg: d is not None for a, d in zip(positional, defaults)}
        for a, d in zip(args.kwonlyargs, args.kw_defaults):
            self.has_default[a.arg] = d is not None
        self.varargs = args.vararg is not None

    def key(self):
        return (self.posonly, tuple(self.positional), tuple(sorted(self.has_default.items())), self.varargs)

    def optional_param(self, call, operand_index):
        """Parameter name that the operand binds to, if it has a default."""
        if operand_index < len(call.args):
            if any(isinstance(a, ast.Starred) for a in call.args[: operand_index + 1]):
                return None
            if operand_index >= len(self.positional):
                return None
            name = self.positional[operand_index]
        else:
            kw = call.keywords[operand_index - len(call.args)]
            if kw.arg is None:
                return None
            name = kw.arg
        return name if self.has_default.get(name) else None


class SignatureIndex:
    """Callee signatures resolved by name across the whole tree.

    A name resolves only if every definition carrying it agrees on the
    signature, otherwise the callee is treated as unknown.
    """

    def __init__(self):
        self._defs = {}

    def add_tree(self, tree):
        parents = parent_map(tree)
        for node in ast.walk(tree):
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                in_class = isinstance(parents.get(node), ast.ClassDef)
                static = any(isinstance(d, ast.Name) and d.id == "staticmethod" for d in node.decorator_list)
                self._defs.setdefault(node.name, []).append((in_class and not static, Signature(node, in_class and not static)))

    def resolve(self, call):
        name = callee_name(call)
        defs = self._defs.get(name, [])
        if isinstance(call.func, ast.Name):
            defs = [d for d in defs if not d[0]]
        if not defs:
            return None
        keys = {sig.key() for _, sig in defs}
        return defs[0][1] if len(keys) == 1 else None


# -- tree walking --------------------------------------------------------------
def iter_sources(root, config):
    """(relpath, abspath, subsystem) for every mapped ``.py`` file, sorted."""
    out = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if not d.startswith((".", "__pycache__")))
        for fname in sorted(filenames):
            if not fname.endswith(".py"):
                continue
            path = os.path.join(dirpath, fname)
            rel = os.path.relpath(path, root).replace(os.sep, "/")
            subsystem = config.subsystem_for(rel)
            if subsystem:
                out.append((rel, path, subsystem))
    out.sort()
    return out


def parse_source(text, rel):
    try:
        return ast.parse(text, filename=rel)
    except SyntaxError as exc:
        raise ScanError(rel, exc.lineno, exc.offset, exc.msg) from None


def load_tree(root, config):
    """Parse every mapped file; returns ([(rel, subsystem, text, ast)], SignatureIndex)."""
    files, index = [], SignatureIndex()
    for rel, path, subsystem in iter_sources(root, config):
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        tree = parse_source(text, rel)
        index.add_tree(tree)
        files.append((rel, subsystem, text, tree))
    return files, index


def scan_module(tree, rel, subsystem, pattern, signatures):
    parents = parent_map(tree)
    points = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Call) and is_matched(node, pattern) and in_function(node, parents):
            name, span = callee_name(node), node_span(node)
            points.append(InjectionPoint.make(rel, span, BugType.MISSING_FUNC_CALL, name, None, subsystem))
            sig = signatures.resolve(node) if signatures else None
            for idx, operand in call_operands(node):
                if corruptible(operand):
                    points.append(InjectionPoint.make(rel, span, BugType.WRONG_PARAM_VALUE, name, idx, subsystem))
                if sig is not None and sig.optional_param(node, idx):
                    points.append(InjectionPoint.make(rel, span, BugType.MISSING_PARAM, name, idx, subsystem))
            if is_consumed(node, parents):
                points.append(InjectionPoint.make(rel, span, BugType.WRONG_RETURN_VALUE, name, 0, subsystem))
        elif isinstance(node, ast.Try) and in_function(node, parents):
            calls = matched_calls(node.body, pattern)
            if calls:
                for handler in node.handlers:
                    points.append(InjectionPoint.make(rel, node_span(handler), BugType.MISSING_EXC_HANDLER, callee_name(calls[0]), None, subsystem))
    return points


def scan(source_tree, config):
    """All injection points of ``source_tree`` in deterministic order."""
    pattern = keyword_pattern(config.all_keywords())
    files, signatures = load_tree(source_tree, config)
    points = []
    for rel, subsystem, _, tree in files:
        points.extend(scan_module(tree, rel, subsystem, pattern, signatures))
    points.sort(key=InjectionPoint.sort_key)
    return points
