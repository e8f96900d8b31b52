"""Source rewriting: trigger-guarded mutants and coverage instrumentation.

A mutant replaces the statement enclosing the injection site with::

    if _fi_rt.triggered('<point id>'):
        <statement with the fault applied>
    else:
        <statement as written>

Only that statement's lines and one import line change; the rest of the
file is kept byte for byte.
"""

import ast
import copy
import hashlib
import os
import shutil

from .scanner import (
    callee_name,
    keyword_pattern,
    load_tree,
    matched_calls,
    node_span,
    parent_map,
    parse_source,
)
from .types import BugType, ContractViolation, InjectionRejected, MutationError, RejectReason

RUNTIME_MODULE = "cloudfi.mutation.runtime"
GUARD_ALIAS = "_fi_rt"
COVER_ALIAS = "_fi_cov"
EXC_ALIAS = "_fi_exc"
BROAD_HANDLERS = {"Exception", "BaseException"}


def _rt(attr, alias=GUARD_ALIAS):
    return ast.Attribute(value=ast.Name(id=alias, ctx=ast.Load()), attr=attr, ctx=ast.Load())


def _find(tree, cls, span):
    for node in ast.walk(tree):
        if isinstance(node, cls) and node_span(node) == tuple(span):
            return node
    return None


def _replace_node(root, target, replacement):
    """Replace ``target`` (by identity) somewhere below ``root``."""
    for node in ast.walk(root):
        for name, value in ast.iter_fields(node):
            if value is target:
                setattr(node, name, replacement)
                return True
            if isinstance(value, list):
                for i, item in enumerate(value):
                    if item is target:
                        value[i] = replacement
                        return True
    return False


def _stmt_start(node):
    decos = getattr(node, "decorator_list", None)
    return min([node.lineno] + [d.lineno for d in decos]) if decos else node.lineno


def _enclosing_stmt(node, parents):
    while not isinstance(node, ast.stmt):
        node = parents[node]
    return node


def _module_insert_line(tree):
    """1-based line before which module-level imports can be inserted."""
    body = list(tree.body)
    i = 0
    if body and isinstance(body[0], ast.Expr) and isinstance(body[0].value, ast.Constant) and isinstance(body[0].value.value, str):
        i = 1
    while i < len(body) and isinstance(body[i], ast.ImportFrom) and body[i].module == "__future__":
        i += 1
    if i < len(body):
        return _stmt_start(body[i])
    return (body[-1].end_lineno + 1) if body else 1


def _dump(nodes):
    return [ast.dump(n, include_attributes=False) for n in nodes]


# -- exception choice ------------------------------------------------------------
def _type_exprs(handler):
    if handler.type is None:
        return []
    if isinstance(handler.type, ast.Tuple):
        return list(handler.type.elts)
    return [handler.type]


def _expr_name(expr):
    if isinstance(expr, ast.Name):
        return expr.id
    if isinstance(expr, ast.Attribute):
        return expr.attr
    return None


def choose_index(point_id, n):
    return int(hashlib.sha256(point_id.encode()).hexdigest(), 16) % n


def exception_candidates(handler, config):
    """Ordered candidates as (expr or None, name) pairs; None means import by name."""
    types = [(t, _expr_name(t)) for t in _type_exprs(handler)]
    configured = [(t, n) for t, n in types if n in config.exceptions]
    if configured:
        return configured
    broad = handler.type is None or any(n in BROAD_HANDLERS for _, n in types)
    if broad and config.exceptions:
        return [(None, n) for n in config.exceptions]
    return [(t, n) for t, n in types if n is not None]


def raise_exception_variant(try_node, handler_index, target_call, point, config, relpath):
    """Faulty statements for MISSING_EXC_HANDLER on a copy of ``try_node``.

    The handler is dropped and the matched call is replaced by a call raising
    an error chosen deterministically from the candidates by point id.
    """
    handler = try_node.handlers[handler_index]
    candidates = exception_candidates(handler, config)
    if not candidates:
        raise InjectionRejected(point, RejectReason.NO_EXCEPTION_TYPE, "handler has no usable type and no exception list is configured")
    expr, name = candidates[choose_index(point.id, len(candidates))]
    prelude = []
    if expr is None:
        level = len(relpath.split("/"))
        prelude.append(ast.ImportFrom(module=config.exceptions_module, names=[ast.alias(name=name, asname=EXC_ALIAS)], level=level))
        expr = ast.Name(id=EXC_ALIAS, ctx=ast.Load())
    else:
        expr = copy.deepcopy(expr)
    fail = ast.Call(func=_rt("fail"), args=[expr, ast.Constant(point.id)], keywords=[])
    if not _replace_node(try_node, target_call, fail):
        raise InjectionRejected(point, RejectReason.SITE_NOT_FOUND, "target call not inside try body")
    del try_node.handlers[handler_index]
    if try_node.handlers:
        return prelude + [try_node]
    if try_node.finalbody:
        return prelude + [ast.Try(body=try_node.body + try_node.orelse, handlers=[], orelse=[], finalbody=try_node.finalbody)]
    return prelude + try_node.body + try_node.orelse


# -- per-bug-type faults -----------------------------------------------------------
def _apply_call_fault(stmt, call, point, signature):
    """Mutate ``call`` (a node inside ``stmt``, both already copied); returns stmts."""
    bt = point.bug_type
    if bt is BugType.MISSING_FUNC_CALL:
        if isinstance(stmt, ast.Expr) and stmt.value is call:
            return [ast.Pass()]
        _replace_node(stmt, call, ast.Constant(None))
        return [stmt]
    if bt is BugType.WRONG_RETURN_VALUE:
        _replace_node(stmt, call, ast.Call(func=_rt("corrupt_value"), args=[call], keywords=[]))
        return [stmt]
    idx = point.operand_index
    n_pos = len(call.args)
    if idx is None or idx >= n_pos + len(call.keywords):
        raise InjectionRejected(point, RejectReason.SITE_NOT_FOUND, f"call has no operand {idx}")
    if bt is BugType.WRONG_PARAM_VALUE:
        if idx < n_pos:
            arg = call.args[idx]
            if isinstance(arg, ast.Starred):
                raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "starred argument")
            call.args[idx] = ast.Call(func=_rt("corrupt_value"), args=[arg], keywords=[])
        else:
            kw = call.keywords[idx - n_pos]
            if kw.arg is None:
                raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "keyword unpacking")
            kw.value = ast.Call(func=_rt("corrupt_value"), args=[kw.value], keywords=[])
        return [stmt]
    if bt is BugType.MISSING_PARAM:
        if signature is None:
            raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "callee signature unknown")
        if not signature.optional_param(call, idx):
            raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "parameter has no default")
        if idx < n_pos:
            later = call.args[idx + 1:]
            names = signature.positional[idx + 1: idx + 1 + len(later)]
            if len(names) < len(later) or (later and idx + 1 < signature.posonly):
                raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "later arguments cannot be passed by keyword")
            call.args = call.args[:idx]
            call.keywords = [ast.keyword(arg=n, value=a) for n, a in zip(names, later)] + call.keywords
        else:
            del call.keywords[idx - n_pos]
        return [stmt]
    raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, f"unexpected bug type {bt}")


def _indent(src, prefix):
    return [prefix + line if line else line for line in src.splitlines()]


def mutate_source(text, point, config, relpath=None, signatures=None):
    """Return the mutated text of one file.  Raises InjectionRejected."""
    relpath = relpath or point.file
    if f"{GUARD_ALIAS}.triggered(" in text:
        raise ContractViolation(f"{relpath} already contains an injected site")
    tree = parse_source(text, relpath)
    parents = parent_map(tree)
    pattern = keyword_pattern(config.all_keywords())

    if point.bug_type is BugType.MISSING_EXC_HANDLER:
        handler = _find(tree, ast.ExceptHandler, point.span)
        if handler is None:
            raise InjectionRejected(point, RejectReason.SITE_NOT_FOUND)
        stmt = parents[handler]
        calls = matched_calls(stmt.body, pattern)
        if not calls:
            raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "no matched call in try body")
        target = calls[0]
    else:
        target = _find(tree, ast.Call, point.span)
        if target is None:
            raise InjectionRejected(point, RejectReason.SITE_NOT_FOUND)
        stmt = _enclosing_stmt(target, parents)

    lines = text.splitlines(keepends=True)
    # an elif cannot be wrapped on its own; guard the whole if/elif chain
    while isinstance(stmt, ast.If) and lines[stmt.lineno - 1][stmt.col_offset:].startswith("elif"):
        stmt = parents[stmt]

    start, end = _stmt_start(stmt), stmt.end_lineno
    first_col = len(lines[start - 1]) - len(lines[start - 1].lstrip())
    if first_col != stmt.col_offset:
        raise InjectionRejected(point, RejectReason.SHARED_LINE, "statement does not start its line")
    tail = lines[end - 1][stmt.end_col_offset:].strip()
    if tail and not tail.startswith("#"):
        raise InjectionRejected(point, RejectReason.SHARED_LINE, "statement does not end its line")

    faulty_stmt = copy.deepcopy(stmt)
    if point.bug_type is BugType.MISSING_EXC_HANDLER:
        try_copy = _find(faulty_stmt, ast.Try, node_span(parents[handler]))
        h_index = parents[handler].handlers.index(handler)
        target_copy = _find(try_copy, ast.Call, node_span(target))
        faulty = raise_exception_variant(try_copy, h_index, target_copy, point, config, relpath)
        if try_copy is not faulty_stmt:
            # try nested inside an if-chain that had to be guarded whole
            _replace_list_item(faulty_stmt, try_copy, faulty)
            faulty = [faulty_stmt]
    else:
        target_copy = _find(faulty_stmt, ast.Call, point.span)
        if point.bug_type is BugType.MISSING_PARAM and signatures is None:
            raise InjectionRejected(point, RejectReason.NOT_APPLICABLE, "callee signature unknown")
        signature = signatures.resolve(target_copy) if signatures is not None else None
        faulty = _apply_call_fault(faulty_stmt, target_copy, point, signature)

    indent = lines[start - 1][:first_col]
    inner = indent + "    "
    faulty_src = "\n".join(ast.unparse(ast.fix_missing_locations(s)) for s in faulty)
    original_src = ast.unparse(stmt)
    guard = [f"{indent}if {GUARD_ALIAS}.triggered({point.id!r}):"] + _indent(faulty_src, inner) + [f"{indent}else:"] + _indent(original_src, inner)
    new_lines = lines[: start - 1] + [ln + "\n" for ln in guard] + lines[end:]
    insert_at = _module_insert_line(tree) - 1
    new_lines.insert(insert_at, f"import {RUNTIME_MODULE} as {GUARD_ALIAS}\n")
    new_text = "".join(new_lines)

    try:
        new_tree = ast.parse(new_text, filename=relpath)
        compile(new_tree, relpath, "exec")
    except SyntaxError as exc:
        raise InjectionRejected(point, RejectReason.COMPILE_ERROR, f"line {exc.lineno}: {exc.msg}") from None
    guards = [n for n in ast.walk(new_tree) if isinstance(n, ast.If) and isinstance(n.test, ast.Call)
              and _expr_name(n.test.func) == "triggered" and n.test.args and getattr(n.test.args[0], "value", None) == point.id]
    if len(guards) != 1 or _dump(guards[0].orelse) != _dump([stmt]) or _dump(guards[0].body) != _dump(ast.parse(faulty_src).body):
        raise InjectionRejected(point, RejectReason.NOT_PRESERVING, "rewritten branches differ from the intended statements")
    return new_text


def _replace_list_item(root, target, replacements):
    for node in ast.walk(root):
        for _, value in ast.iter_fields(node):
            if isinstance(value, list):
                for i, item in enumerate(value):
                    if item is target:
                        value[i:i + 1] = replacements
                        return
    raise MutationError("nested try not found")


# -- tree-level operations -------------------------------------------------------------
def copy_tree(src, dst):
    if os.path.exists(dst):
        shutil.rmtree(dst)
    shutil.copytree(src, dst, ignore=shutil.ignore_patterns("__pycache__", "*.pyc"))
    return dst


def inject(source_tree, point, trigger=None, out_dir=None, config=None):
    """Write a mutant of ``source_tree`` for exactly one ``point``.

    With ``out_dir`` the tree is copied first; otherwise the file is rewritten
    in place.  The trigger, if given, starts out disabled.
    """
    from .config import default_scan_config

    config = config or default_scan_config()
    _, signatures = load_tree(source_tree, config)
    path = os.path.join(source_tree, point.file)
    if not os.path.exists(path):
        raise InjectionRejected(point, RejectReason.SITE_NOT_FOUND, "file missing")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    new_text = mutate_source(text, point, config, point.file, signatures)
    root = copy_tree(source_tree, out_dir) if out_dir else source_tree
    with open(os.path.join(root, point.file), "w", encoding="utf-8") as fh:
        fh.write(new_text)
    if trigger is not None:
        trigger.disable()
    return root


def validate_points(source_tree, points, config):
    """Try every point; returns ({id: mutated text}, {id: InjectionRejected})."""
    _, signatures = load_tree(source_tree, config)
    texts, ok, rejected = {}, {}, {}
    for p in points:
        if p.file not in texts:
            with open(os.path.join(source_tree, p.file), encoding="utf-8") as fh:
                texts[p.file] = fh.read()
        try:
            ok[p.id] = mutate_source(texts[p.file], p, config, p.file, signatures)
        except InjectionRejected as exc:
            rejected[p.id] = exc
    return ok, rejected


class _CoverageTransformer(ast.NodeTransformer):
    def __init__(self, sites):
        self.sites = sites
        self.seen = set()

    def visit_Call(self, node):
        span = node_span(node)
        self.generic_visit(node)
        ids = self.sites.get(span)
        if not ids:
            return node
        self.seen.add(span)
        marker = ast.Call(func=_rt("cover", COVER_ALIAS), args=[ast.Constant(i) for i in ids], keywords=[])
        return ast.BoolOp(op=ast.And(), values=[marker, node])


def instrument_source(text, points, config, relpath):
    tree = parse_source(text, relpath)
    pattern = keyword_pattern(config.all_keywords())
    sites = {}
    for p in points:
        if p.bug_type is BugType.MISSING_EXC_HANDLER:
            handler = _find(tree, ast.ExceptHandler, p.span)
            calls = matched_calls(parent_map(tree)[handler].body, pattern) if handler is not None else []
            if not calls:
                raise MutationError(f"point {p.id} not found in {relpath}")
            span = node_span(calls[0])
        else:
            span = tuple(p.span)
        sites.setdefault(span, [])
        if p.id not in sites[span]:
            sites[span].append(p.id)
    transformer = _CoverageTransformer(sites)
    tree = transformer.visit(tree)
    missing = set(sites) - transformer.seen
    if missing:
        ids = sorted(i for s in missing for i in sites[s])
        raise MutationError(f"points not found in {relpath}: {', '.join(ids)}")
    import_node = ast.Import(names=[ast.alias(name=RUNTIME_MODULE, asname=COVER_ALIAS)])
    body = tree.body
    i = 1 if body and isinstance(body[0], ast.Expr) and isinstance(getattr(body[0], "value", None), ast.Constant) else 0
    while i < len(body) and isinstance(body[i], ast.ImportFrom) and body[i].module == "__future__":
        i += 1
    body.insert(i, import_node)
    return ast.unparse(ast.fix_missing_locations(tree)) + "\n"


def instrument_coverage(source_tree, points, out_dir, config=None):
    """Copy ``source_tree`` to ``out_dir`` with a coverage marker at every point's site."""
    from .config import default_scan_config

    config = config or default_scan_config()
    copy_tree(source_tree, out_dir)
    by_file = {}
    for p in points:
        by_file.setdefault(p.file, []).append(p)
    for rel, pts in sorted(by_file.items()):
        src = os.path.join(source_tree, rel)
        if not os.path.exists(src):
            raise MutationError(f"point {pts[0].id} refers to missing file {rel}")
        with open(src, encoding="utf-8") as fh:
            text = fh.read()
        with open(os.path.join(out_dir, rel), "w", encoding="utf-8") as fh:
            fh.write(instrument_source(text, pts, config, rel))
    return out_dir


__all__ = [
    "callee_name",
    "copy_tree",
    "inject",
    "instrument_coverage",
    "instrument_source",
    "mutate_source",
    "raise_exception_variant",
    "validate_points",
]
