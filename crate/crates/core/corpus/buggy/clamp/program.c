int main() {
    int x;
    int lo = 1;
    int hi = 10;
    scanf("%d", &x);
    if (x < lo)
        x = lo;
    if (x > hi)
        x = hi - 1;
    printf("%d", x);
    return 0;
}
