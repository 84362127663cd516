public class MathKit {

    public static double hypotenuse(double a, double b) {
        return Math.sqrt(a * a + b * b);
    }

    public static double clamp(double v, double lo, double hi) {
        if (v < lo) {
            return lo;
        }
        if (v > hi) {
            return hi;
        }
        return v;
    }

    public static long fib(long n) {
        if (n < 2) {
            return n;
        }
        return fib(n - 1) + fib(n - 2);
    }

    public static double average(double[] values) {
        if (values.length == 0) {
            return 0.0;
        }
        double total = 0.0;
        for (int i = 0; i < values.length; i++) {
            total = total + values[i];
        }
        return total / values.length;
    }
}
