int main() {
    int n, r;
    scanf("%d", &n);
    r = n % 3;
    if (r == 0)
        printf("%d", 0);
    else
        printf("%d", 1);
    return 0;
}
