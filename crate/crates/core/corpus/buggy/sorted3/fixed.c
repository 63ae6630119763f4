int main() {
    int a, b, c;
    scanf("%d %d %d", &a, &b, &c);
    bool ok = a <= b && b <= c;
    if (ok)
        printf("%d", 1);
    else
        printf("%d", 0);
    return 0;
}
