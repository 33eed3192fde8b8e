print("something went sideways")
