int main() {
    int x;
    bool small, even;
    scanf("%d", &x);
    small = x < 10 && x > -10;
    even = x % 2 == 0;
    printf("%d %d", small, even);
    return 0;
}
