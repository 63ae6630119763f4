int main() {
    int x;
    int lo = 0;
    int hi = 10;
    scanf("%d", &x);
    if (x < lo)
        x = lo;
    if (x > hi)
        x = hi;
    printf("%d", x);
    return 0;
}
