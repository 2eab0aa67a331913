"""Baseline ordered maps the glass is benchmarked against.

Python ships no ordered map, so the comparison target is the classic
red-black tree in two builds: ``RBMap`` allocates a node object per
insert (the everyday approach), ``RBMapArena`` keeps nodes in parallel
arrays recycled through a slot free list (the custom-allocator
counterpart). Both expose the same ADT surface as the glass.
"""

from __future__ import annotations

RED = True
BLACK = False


class _Node:
    __slots__ = ("key", "value", "left", "right", "parent", "red")

    def __init__(self, key=0, value=None):
        self.key = key
        self.value = value
        self.left = self
        self.right = self
        self.parent = self
        self.red = BLACK


class RBMap:
    """Red-black tree with per-node objects."""

    def __init__(self):
        self.nil = _Node()
        self.root = self.nil
        self.count = 0

    def __len__(self):
        return self.count

    def find(self, key):
        nil = self.nil
        x = self.root
        while x is not nil:
            k = x.key
            if key < k:
                x = x.left
            elif key > k:
                x = x.right
            else:
                return x.value
        return None

    def min(self):
        if self.root is self.nil:
            return None
        x = self.root
        while x.left is not self.nil:
            x = x.left
        return x.key

    def max(self):
        if self.root is self.nil:
            return None
        x = self.root
        while x.right is not self.nil:
            x = x.right
        return x.key

    def next(self, key):
        nil = self.nil
        x = self.root
        best = None
        while x is not nil:
            if x.key > key:
                best = x.key
                x = x.left
            else:
                x = x.right
        return best

    def prev(self, key):
        nil = self.nil
        x = self.root
        best = None
        while x is not nil:
            if x.key < key:
                best = x.key
                x = x.right
            else:
                x = x.left
        return best

    def keys(self):
        out = []
        stack = []
        x = self.root
        while stack or x is not self.nil:
            while x is not self.nil:
                stack.append(x)
                x = x.left
            x = stack.pop()
            out.append(x.key)
            x = x.right
        return out

    def first_items(self, count, descending=False):
        """Up to ``count`` (key, value) pairs from the ordered end,
        walked with parent-pointer successor steps (O(1) amortized,
        the way language-runtime map iterators move)."""
        nil = self.nil
        x = self.root
        if x is nil:
            return []
        out = []
        if not descending:
            while x.left is not nil:
                x = x.left
            while x is not nil and len(out) < count:
                out.append((x.key, x.value))
                if x.right is not nil:
                    x = x.right
                    while x.left is not nil:
                        x = x.left
                else:
                    child = x
                    x = x.parent
                    while x is not nil and child is x.right:
                        child = x
                        x = x.parent
        else:
            while x.right is not nil:
                x = x.right
            while x is not nil and len(out) < count:
                out.append((x.key, x.value))
                if x.left is not nil:
                    x = x.left
                    while x.right is not nil:
                        x = x.right
                else:
                    child = x
                    x = x.parent
                    while x is not nil and child is x.left:
                        child = x
                        x = x.parent
        return out

    def _rotate_left(self, x):
        y = x.right
        x.right = y.left
        if y.left is not self.nil:
            y.left.parent = x
        y.parent = x.parent
        if x.parent is self.nil:
            self.root = y
        elif x is x.parent.left:
            x.parent.left = y
        else:
            x.parent.right = y
        y.left = x
        x.parent = y

    def _rotate_right(self, x):
        y = x.left
        x.left = y.right
        if y.right is not self.nil:
            y.right.parent = x
        y.parent = x.parent
        if x.parent is self.nil:
            self.root = y
        elif x is x.parent.right:
            x.parent.right = y
        else:
            x.parent.left = y
        y.right = x
        x.parent = y

    def insert(self, key, value) -> bool:
        nil = self.nil
        y = nil
        x = self.root
        while x is not nil:
            y = x
            if key < x.key:
                x = x.left
            elif key > x.key:
                x = x.right
            else:
                return False
        z = _Node(key, value)
        z.left = nil
        z.right = nil
        z.parent = y
        z.red = RED
        if y is nil:
            self.root = z
        elif key < y.key:
            y.left = z
        else:
            y.right = z
        self.count += 1
        while z.parent.red:
            zp = z.parent
            zpp = zp.parent
            if zp is zpp.left:
                y = zpp.right
                if y.red:
                    zp.red = BLACK
                    y.red = BLACK
                    zpp.red = RED
                    z = zpp
                else:
                    if z is zp.right:
                        z = zp
                        self._rotate_left(z)
                        zp = z.parent
                        zpp = zp.parent
                    zp.red = BLACK
                    zpp.red = RED
                    self._rotate_right(zpp)
            else:
                y = zpp.left
                if y.red:
                    zp.red = BLACK
                    y.red = BLACK
                    zpp.red = RED
                    z = zpp
                else:
                    if z is zp.left:
                        z = zp
                        self._rotate_right(z)
                        zp = z.parent
                        zpp = zp.parent
                    zp.red = BLACK
                    zpp.red = RED
                    self._rotate_left(zpp)
        self.root.red = BLACK
        return True

    def _transplant(self, u, v):
        if u.parent is self.nil:
            self.root = v
        elif u is u.parent.left:
            u.parent.left = v
        else:
            u.parent.right = v
        v.parent = u.parent

    def erase(self, key) -> bool:
        nil = self.nil
        z = self.root
        while z is not nil:
            if key < z.key:
                z = z.left
            elif key > z.key:
                z = z.right
            else:
                break
        if z is nil:
            return False
        y = z
        y_was_red = y.red
        if z.left is nil:
            x = z.right
            self._transplant(z, z.right)
        elif z.right is nil:
            x = z.left
            self._transplant(z, z.left)
        else:
            y = z.right
            while y.left is not nil:
                y = y.left
            y_was_red = y.red
            x = y.right
            if y.parent is z:
                x.parent = y
            else:
                self._transplant(y, y.right)
                y.right = z.right
                y.right.parent = y
            self._transplant(z, y)
            y.left = z.left
            y.left.parent = y
            y.red = z.red
        self.count -= 1
        if not y_was_red:
            # delete fixup
            while x is not self.root and not x.red:
                xp = x.parent
                if x is xp.left:
                    w = xp.right
                    if w.red:
                        w.red = BLACK
                        xp.red = RED
                        self._rotate_left(xp)
                        w = xp.right
                    if not w.left.red and not w.right.red:
                        w.red = RED
                        x = xp
                    else:
                        if not w.right.red:
                            w.left.red = BLACK
                            w.red = RED
                            self._rotate_right(w)
                            w = xp.right
                        w.red = xp.red
                        xp.red = BLACK
                        w.right.red = BLACK
                        self._rotate_left(xp)
                        x = self.root
                else:
                    w = xp.left
                    if w.red:
                        w.red = BLACK
                        xp.red = RED
                        self._rotate_right(xp)
                        w = xp.left
                    if not w.right.red and not w.left.red:
                        w.red = RED
                        x = xp
                    else:
                        if not w.left.red:
                            w.right.red = BLACK
                            w.red = RED
                            self._rotate_left(w)
                            w = xp.left
                        w.red = xp.red
                        xp.red = BLACK
                        w.left.red = BLACK
                        self._rotate_right(xp)
                        x = self.root
            x.red = BLACK
        return True


class RBMapArena:
    """Red-black tree stored in parallel arrays with a slot free list.

    Node 0 is the nil sentinel. Freed slots are recycled LIFO, so a
    steady-state workload allocates nothing.
    """

    def __init__(self):
        self.key = [0]
        self.value = [None]
        self.left = [0]
        self.right = [0]
        self.parent = [0]
        self.red = [BLACK]
        self.free = []
        self.root = 0
        self.count = 0

    def __len__(self):
        return self.count

    def _new_node(self, key, value) -> int:
        if self.free:
            i = self.free.pop()
            self.key[i] = key
            self.value[i] = value
        else:
            i = len(self.key)
            self.key.append(key)
            self.value.append(value)
            self.left.append(0)
            self.right.append(0)
            self.parent.append(0)
            self.red.append(BLACK)
        return i

    def find(self, k):
        key = self.key
        left = self.left
        right = self.right
        x = self.root
        while x:
            kx = key[x]
            if k < kx:
                x = left[x]
            elif k > kx:
                x = right[x]
            else:
                return self.value[x]
        return None

    def min(self):
        if not self.root:
            return None
        left = self.left
        x = self.root
        while left[x]:
            x = left[x]
        return self.key[x]

    def max(self):
        if not self.root:
            return None
        right = self.right
        x = self.root
        while right[x]:
            x = right[x]
        return self.key[x]

    def next(self, k):
        key = self.key
        left = self.left
        right = self.right
        x = self.root
        best = None
        while x:
            if key[x] > k:
                best = key[x]
                x = left[x]
            else:
                x = right[x]
        return best

    def prev(self, k):
        key = self.key
        left = self.left
        right = self.right
        x = self.root
        best = None
        while x:
            if key[x] < k:
                best = key[x]
                x = right[x]
            else:
                x = left[x]
        return best

    def keys(self):
        out = []
        stack = []
        x = self.root
        while stack or x:
            while x:
                stack.append(x)
                x = self.left[x]
            x = stack.pop()
            out.append(self.key[x])
            x = self.right[x]
        return out

    def first_items(self, count, descending=False):
        """See RBMap.first_items; index-array flavor."""
        x = self.root
        if not x:
            return []
        key, value, parent = self.key, self.value, self.parent
        out = []
        if not descending:
            left, right = self.left, self.right
        else:
            left, right = self.right, self.left
        while left[x]:
            x = left[x]
        while x and len(out) < count:
            out.append((key[x], value[x]))
            if right[x]:
                x = right[x]
                while left[x]:
                    x = left[x]
            else:
                child = x
                x = parent[x]
                while x and child == right[x]:
                    child = x
                    x = parent[x]
        return out

    def _rotate_left(self, x):
        left, right, parent = self.left, self.right, self.parent
        y = right[x]
        right[x] = left[y]
        if left[y]:
            parent[left[y]] = x
        parent[y] = parent[x]
        if not parent[x]:
            self.root = y
        elif x == left[parent[x]]:
            left[parent[x]] = y
        else:
            right[parent[x]] = y
        left[y] = x
        parent[x] = y

    def _rotate_right(self, x):
        left, right, parent = self.left, self.right, self.parent
        y = left[x]
        left[x] = right[y]
        if right[y]:
            parent[right[y]] = x
        parent[y] = parent[x]
        if not parent[x]:
            self.root = y
        elif x == right[parent[x]]:
            right[parent[x]] = y
        else:
            left[parent[x]] = y
        right[y] = x
        parent[x] = y

    def insert(self, k, v) -> bool:
        key, left, right = self.key, self.left, self.right
        y = 0
        x = self.root
        while x:
            y = x
            kx = key[x]
            if k < kx:
                x = left[x]
            elif k > kx:
                x = right[x]
            else:
                return False
        z = self._new_node(k, v)
        parent, red = self.parent, self.red
        left[z] = 0
        right[z] = 0
        parent[z] = y
        red[z] = RED
        if not y:
            self.root = z
        elif k < key[y]:
            left[y] = z
        else:
            right[y] = z
        self.count += 1
        while red[parent[z]]:
            zp = parent[z]
            zpp = parent[zp]
            if zp == left[zpp]:
                u = right[zpp]
                if red[u]:
                    red[zp] = BLACK
                    red[u] = BLACK
                    red[zpp] = RED
                    z = zpp
                else:
                    if z == right[zp]:
                        z = zp
                        self._rotate_left(z)
                        zp = parent[z]
                        zpp = parent[zp]
                    red[zp] = BLACK
                    red[zpp] = RED
                    self._rotate_right(zpp)
            else:
                u = left[zpp]
                if red[u]:
                    red[zp] = BLACK
                    red[u] = BLACK
                    red[zpp] = RED
                    z = zpp
                else:
                    if z == left[zp]:
                        z = zp
                        self._rotate_right(z)
                        zp = parent[z]
                        zpp = parent[zp]
                    red[zp] = BLACK
                    red[zpp] = RED
                    self._rotate_left(zpp)
        red[self.root] = BLACK
        return True

    def _transplant(self, u, v):
        parent = self.parent
        if not parent[u]:
            self.root = v
        elif u == self.left[parent[u]]:
            self.left[parent[u]] = v
        else:
            self.right[parent[u]] = v
        parent[v] = parent[u]

    def erase(self, k) -> bool:
        key, left, right = self.key, self.left, self.right
        z = self.root
        while z:
            kz = key[z]
            if k < kz:
                z = left[z]
            elif k > kz:
                z = right[z]
            else:
                break
        if not z:
            return False
        parent, red = self.parent, self.red
        y = z
        y_was_red = red[y]
        if not left[z]:
            x = right[z]
            self._transplant(z, right[z])
        elif not right[z]:
            x = left[z]
            self._transplant(z, left[z])
        else:
            y = right[z]
            while left[y]:
                y = left[y]
            y_was_red = red[y]
            x = right[y]
            if parent[y] == z:
                parent[x] = y
            else:
                self._transplant(y, right[y])
                right[y] = right[z]
                parent[right[y]] = y
            self._transplant(z, y)
            left[y] = left[z]
            parent[left[y]] = y
            red[y] = red[z]
        self.value[z] = None
        self.free.append(z)
        self.count -= 1
        if not y_was_red:
            while x != self.root and not red[x]:
                xp = parent[x]
                if x == left[xp]:
                    w = right[xp]
                    if red[w]:
                        red[w] = BLACK
                        red[xp] = RED
                        self._rotate_left(xp)
                        w = right[xp]
                    if not red[left[w]] and not red[right[w]]:
                        red[w] = RED
                        x = xp
                    else:
                        if not red[right[w]]:
                            red[left[w]] = BLACK
                            red[w] = RED
                            self._rotate_right(w)
                            w = right[xp]
                        red[w] = red[xp]
                        red[xp] = BLACK
                        red[right[w]] = BLACK
                        self._rotate_left(xp)
                        x = self.root
                else:
                    w = left[xp]
                    if red[w]:
                        red[w] = BLACK
                        red[xp] = RED
                        self._rotate_right(xp)
                        w = left[xp]
                    if not red[right[w]] and not red[left[w]]:
                        red[w] = RED
                        x = xp
                    else:
                        if not red[left[w]]:
                            red[right[w]] = BLACK
                            red[w] = RED
                            self._rotate_left(w)
                            w = left[xp]
                        red[w] = red[xp]
                        red[xp] = BLACK
                        red[left[w]] = BLACK
                        self._rotate_right(xp)
                        x = self.root
            red[x] = BLACK
        return True


class BaselineBook:
    """Order-book side over a baseline map: the unbounded way a book is
    kept on top of an ordinary ordered map."""

    def __init__(self, side: str, map_factory=RBMap):
        assert side in ("min", "max")
        self.side = side
        self.levels_map = map_factory()

    def __len__(self):
        return len(self.levels_map)

    def adjust(self, price: int, delta: int):
        m = self.levels_map
        amount = m.find(price)
        if amount is None:
            amount = 0
        else:
            m.erase(price)
        new_amount = amount + delta
        if new_amount:
            m.insert(price, new_amount)

    def find(self, price: int):
        return self.levels_map.find(price)

    def best(self):
        return self.levels_map.min() if self.side == "min" else self.levels_map.max()

    def next_best_after(self, price: int):
        if self.side == "min":
            return self.levels_map.next(price)
        return self.levels_map.prev(price)

    def iterate_best(self, depth: int):
        return self.levels_map.first_items(depth, descending=self.side == "max")
