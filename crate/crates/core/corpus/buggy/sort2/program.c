int main() {
    int a, b, t;
    scanf("%d %d", &a, &b);
    if (a > b) {
        t = a;
        a = b;
        b = a;
    }
    printf("%d %d", a, b);
    return 0;
}
