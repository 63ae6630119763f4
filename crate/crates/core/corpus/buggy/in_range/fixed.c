int main() {
    int x, r;
    scanf("%d", &x);
    r = 0;
    if (x >= 0 && x <= 9)
        r = 1;
    if (x >= 20 && x <= 29)
        r = 2;
    printf("%d", r);
    return 0;
}
