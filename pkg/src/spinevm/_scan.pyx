# cython: language_level=3
"""Compiled twin of ``spine._scan_py``: same checks, no labels.  Needs
the compiled ``spine`` module for its typed field access."""

from .spine cimport Binder, HCtor, HDtor, HPrim, HVar, HVarT, Spine


cdef inline bint _is_ref(object h):
    return type(h) is HVar or type(h) is HVarT or type(h) is HDtor


def scan(Spine root):
    cdef list todo = [root]
    cdef list pending, B, stack, depth
    cdef dict pos
    cdef Py_ssize_t i, j, n, k, last, e, first_open, acc
    cdef Spine s, p, annot, rhs
    cdef Binder b, tgt
    cdef object h, end, c, x, o
    while todo:
        s = <Spine>todo.pop()
        h = s.head
        end = s.end
        c = s.ctx
        if type(h) is HCtor:
            p = (<HCtor>h).payload
            if p is not None:
                if p.end is not c:
                    return s
                todo.append(p)
        elif type(h) is HPrim:
            p = (<HPrim>h).annot
            if p.end is not c:
                return s
            todo.append(p)
        elif _is_ref(h):
            tgt = (<HVar>h).binder
            if tgt.dead:
                return s
            x = c
            while x is not tgt:
                if x is None:
                    return s
                x = (<Binder>x).next
        else:
            return s
        pending = <list>s.pending
        if c is end:
            for o in pending:
                if (<Spine>o).end is not end:
                    return s
            todo.extend(pending)
            continue

        B = []
        x = c
        while x is not end:
            if x is None:
                return s
            B.append(x)
            x = (<Binder>x).next
        n = len(B)
        pos = {}
        for i in range(n):
            pos[B[i]] = i
        pos[end] = n

        first_open = -1
        stack = []
        depth = None
        for i in range(n):
            b = <Binder>B[i]
            annot = <Spine>b.annot
            if annot.end is not b.next:
                return s
            todo.append(annot)
            while stack and <Py_ssize_t>stack[len(stack) - 1] <= i:
                stack.pop()
            if b.rhs is None:
                if first_open < 0:
                    first_open = i
                continue
            rhs = <Spine>b.rhs
            todo.append(rhs)
            o = pos.get(rhs.end)
            if o is None:
                return s
            j = o
            if j < i:
                return s
            if j == i:
                continue
            if stack and j > <Py_ssize_t>stack[len(stack) - 1]:
                return s
            stack.append(j)
            if depth is None:
                depth = [0] * (n + 2)
            depth[i + 1] += 1
            depth[j] -= 1
        if depth is not None:
            acc = 0
            for k in range(n + 1):
                acc += <Py_ssize_t>depth[k]
                depth[k] = acc

        last = 0
        for k in range(len(pending) - 1, -1, -1):
            o = pos.get((<Spine>pending[k]).end)
            if o is None:
                return s
            e = o
            if e < last:
                return s
            last = e
            if depth is not None and <Py_ssize_t>depth[e] > 0:
                return s
            if first_open >= 0 and e > first_open:
                return s
        todo.extend(pending)
    return None
