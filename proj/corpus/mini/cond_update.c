int x, y;
x = 0;
y = 0;
while (x < 10) {
  if (unknown()) {
    x = x + 1;
  } else {
    x = x + 1;
    y = y + 1;
  }
}
assert(y <= 10);
