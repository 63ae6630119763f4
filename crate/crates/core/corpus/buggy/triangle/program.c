int main() {
    int a, b, c, k;
    scanf("%d %d %d", &a, &b, &c);
    if (a == b && b == c)
        k = 3;
    else if (a == b || b == c || a == b)
        k = 2;
    else
        k = 1;
    printf("%d", k);
    return 0;
}
