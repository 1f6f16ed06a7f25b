int x, y;
x = 0;
y = 10;
while (x < 10) {
  x++;
  y--;
}
assert(y == 0);
