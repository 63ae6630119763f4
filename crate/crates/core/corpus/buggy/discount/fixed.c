int main() {
    int q, p, total;
    scanf("%d %d", &q, &p);
    total = q * p;
    if (q >= 10 && total > 100)
        total = total - total / 10;
    printf("%d", total);
    return 0;
}
