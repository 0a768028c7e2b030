"""Cross-app integration tests"""
